//! Reading bodies, normal forms and expressions from the command line.
//!
//! Every argument may be inline text, a path to a file, or `-` for stdin.

use std::io::Read;
use std::path::Path;

use tropfactor::geometry::{convex_hull, LatticeBody, LatticePoint};
use tropfactor::maxplus::MaxPlusExpr;
use tropfactor::parser::parse_expression;
use tropfactor::signed::NormalForm;

use crate::CliError;

pub fn read_source(arg: &str) -> Result<String, CliError> {
    if arg == "-" {
        let mut buf = String::new();
        std::io::stdin()
            .read_to_string(&mut buf)
            .map_err(|e| CliError::Input(format!("reading stdin: {e}")))?;
        return Ok(buf);
    }
    let path = Path::new(arg);
    if path.is_file() {
        return std::fs::read_to_string(path).map_err(|e| CliError::Input(format!("reading {arg}: {e}")));
    }
    Ok(arg.to_string())
}

/// `x,y` with optional surrounding parentheses or brackets.
pub fn parse_point(text: &str) -> Result<LatticePoint, CliError> {
    let inner = text.trim().trim_matches(|c| matches!(c, '(' | ')' | '[' | ']'));
    let mut parts = inner.split(',').map(str::trim);
    let bad = || CliError::Input(format!("expected a point x,y, got '{text}'"));
    let (Some(x), Some(y), None) = (parts.next(), parts.next(), parts.next()) else {
        return Err(bad());
    };
    Ok(LatticePoint::new(x.parse().map_err(|_| bad())?, y.parse().map_err(|_| bad())?))
}

/// Whitespace or `;` separated list of `x,y` points.
pub fn parse_point_list(text: &str) -> Result<Vec<LatticePoint>, CliError> {
    let pts = text
        .split(|c: char| c.is_whitespace() || c == ';')
        .filter(|s| !s.is_empty())
        .map(parse_point)
        .collect::<Result<Vec<_>, _>>()?;
    if pts.is_empty() {
        return Err(CliError::Input("no points given".into()));
    }
    Ok(pts)
}

/// A body given as `{"vertices": ..}` / `{"points": ..}` JSON or as an inline
/// point list, whose hull is taken.
pub fn parse_body_text(text: &str) -> Result<LatticeBody, CliError> {
    let text = text.trim();
    if text.starts_with('{') {
        return serde_json::from_str(text).map_err(|e| CliError::Input(format!("body JSON: {e}")));
    }
    convex_hull(&parse_point_list(text)?).map_err(CliError::from)
}

pub fn read_body(arg: &str) -> Result<LatticeBody, CliError> {
    parse_body_text(&read_source(arg)?)
}

pub fn read_normal_form(arg: &str) -> Result<NormalForm, CliError> {
    serde_json::from_str(read_source(arg)?.trim()).map_err(|e| CliError::Input(format!("normal form JSON: {e}")))
}

pub fn read_expression(arg: &str) -> Result<MaxPlusExpr, CliError> {
    let src = read_source(arg)?;
    parse_expression(src.trim()).map_err(CliError::from)
}

/// One body per non-empty line; `#` starts a comment line.
pub fn read_batch(arg: &str) -> Result<Vec<LatticeBody>, CliError> {
    read_source(arg)?
        .lines()
        .map(str::trim)
        .filter(|l| !l.is_empty() && !l.starts_with('#'))
        .map(parse_body_text)
        .collect()
}
