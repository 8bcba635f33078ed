use std::path::Path;

use pmeanfair_core::WelfareParam;

use crate::error::{read, CliError, Result};

/// A decimal in `[-inf, 1]` or the literal `-inf`.
pub fn parse_p(text: &str) -> Result<f64> {
    let t = text.trim();
    let p = if t.eq_ignore_ascii_case("-inf") {
        f64::NEG_INFINITY
    } else {
        t.parse::<f64>()
            .ok()
            .filter(|p| p.is_finite())
            .ok_or_else(|| CliError::Malformed(format!("p must be a decimal or -inf, got {text:?}")))?
    };
    if p > 1.0 {
        return Err(CliError::Malformed(format!("p must be at most 1, got {text}")));
    }
    Ok(p)
}

pub fn format_p(p: f64) -> String {
    if p == f64::NEG_INFINITY {
        "-inf".to_string()
    } else {
        p.to_string()
    }
}

/// Agent weights from a JSON array.
pub fn load_eta(path: &Path) -> Result<Vec<f64>> {
    serde_json::from_str(&read(path)?).map_err(CliError::from)
}

pub fn welfare_param(p: f64, eta: Option<Vec<f64>>) -> Result<WelfareParam> {
    Ok(match eta {
        Some(w) => WelfareParam::with_weights(p, w)?,
        None => WelfareParam::new(p)?,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn p_literals() {
        assert_eq!(parse_p("0").unwrap(), 0.0);
        assert_eq!(parse_p("1").unwrap(), 1.0);
        assert_eq!(parse_p("-inf").unwrap(), f64::NEG_INFINITY);
        assert_eq!(parse_p("-2.5").unwrap(), -2.5);
        assert_eq!(parse_p(" 0.25 ").unwrap(), 0.25);
        for bad in ["1.5", "inf", "nan", "abc", "", "-infinity"] {
            assert!(parse_p(bad).is_err(), "{bad}");
        }
        assert_eq!(format_p(f64::NEG_INFINITY), "-inf");
        assert_eq!(format_p(-0.5), "-0.5");
        assert_eq!(format_p(0.0), "0");
    }
}
