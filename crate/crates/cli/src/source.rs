//! Family sources: expressions such as `E(w,2)`, `F(3)`, `star(F,2)`,
//! `star(E(2,2))`, `seg(w+1)` and `file(path)`.

use std::path::Path;
use std::sync::Arc;

use lcs_core::constructions::{block_family, CodedFamily, SegmentFamily};
use lcs_core::family::{star, ExplicitFamily, Family};
use lcs_core::{Error, Ordinal, Result};

fn invalid(msg: impl Into<String>) -> Error {
    Error::Invalid(msg.into())
}

/// Splits `a, b(c, d), e` at top-level commas.
pub fn split_args(s: &str) -> Vec<&str> {
    let mut out = Vec::new();
    let (mut depth, mut start) = (0i32, 0);
    for (i, c) in s.char_indices() {
        match c {
            '(' | '[' | '{' => depth += 1,
            ')' | ']' | '}' => depth -= 1,
            ',' if depth == 0 => {
                out.push(s[start..i].trim());
                start = i + 1;
            }
            _ => {}
        }
    }
    out.push(s[start..].trim());
    out.retain(|a| !a.is_empty());
    out
}

fn ordinal(s: &str) -> Result<Ordinal> {
    s.parse()
}

pub fn load_file(path: &Path) -> Result<Family> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| invalid(format!("cannot read {}: {e}", path.display())))?;
    let label = path
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| "file".into());
    Ok(Arc::new(ExplicitFamily::from_json(label, &text)?))
}

pub fn construct(name: &str, kappa: &Ordinal, gamma: &Ordinal) -> Result<Family> {
    match name {
        "E" => block_family(kappa, gamma),
        "F" if *kappa == Ordinal::omega() => Ok(Arc::new(CodedFamily::new(gamma)?)),
        "F" => Err(invalid("F is defined over kappa = w only")),
        "seg" => Ok(Arc::new(SegmentFamily::new(gamma.clone()))),
        _ => Err(invalid(format!("unknown construction {name:?} (E, F, seg)"))),
    }
}

/// Parses a family expression.
pub fn parse(expr: &str) -> Result<Family> {
    let expr = expr.trim();
    let (name, inner) = match expr.find('(') {
        Some(i) if expr.ends_with(')') => (expr[..i].trim(), &expr[i + 1..expr.len() - 1]),
        _ => return Err(invalid(format!("expected name(args) in family expression {expr:?}"))),
    };
    let args = split_args(inner);
    let arity = |n: usize| {
        if args.len() == n {
            Ok(())
        } else {
            Err(invalid(format!("{name} takes {n} argument(s), got {}", args.len())))
        }
    };
    match name {
        "E" => {
            arity(2)?;
            block_family(&ordinal(args[0])?, &ordinal(args[1])?)
        }
        "F" => {
            arity(1)?;
            construct("F", &Ordinal::omega(), &ordinal(args[0])?)
        }
        "seg" => {
            arity(1)?;
            construct("seg", &Ordinal::omega(), &ordinal(args[0])?)
        }
        "file" => {
            arity(1)?;
            load_file(Path::new(args[0]))
        }
        "star" => match args.as_slice() {
            [inner] => Ok(star(parse(inner)?)),
            [base, gamma] => Ok(star(construct(base, &Ordinal::omega(), &ordinal(gamma)?)?)),
            _ => Err(invalid("star takes a family expression or a construction name and gamma")),
        },
        _ => Err(invalid(format!("unknown family {name:?} (E, F, seg, star, file)"))),
    }
}
