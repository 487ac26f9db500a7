//! Exact rational arithmetic used for density and charge computations.
//!
//! All density thresholds in this crate are rationals with small
//! denominators (14/5, 36/13, ...), and charge bookkeeping during
//! discharging must be exact — floating point would silently break the
//! equality assertions that the audits rely on. `i128` components leave
//! ample headroom: every quantity we form is bounded by small multiples
//! of `n * m` for graphs that fit in memory.

use std::fmt::Write as _;

/// Exact rational number with `i128` numerator and denominator.
pub type Rational = num_rational::Ratio<i128>;

/// Builds a rational from a numerator and denominator.
///
/// # Panics
///
/// Panics if `den == 0`.
pub fn ratio(num: i128, den: i128) -> Rational {
    Rational::new(num, den)
}

/// Formats a rational as `p/q` in lowest terms, always including the
/// denominator (`2/1`, not `2`), so that output is unambiguous to parse.
pub fn format_ratio(r: Rational) -> String {
    let mut s = String::new();
    let _ = write!(s, "{}/{}", r.numer(), r.denom());
    s
}

/// Parses a rational from `p/q` or plain integer form.
pub fn parse_ratio(s: &str) -> Result<Rational, String> {
    let s = s.trim();
    match s.split_once('/') {
        Some((p, q)) => {
            let num: i128 = p
                .trim()
                .parse()
                .map_err(|e| format!("bad numerator {p:?}: {e}"))?;
            let den: i128 = q
                .trim()
                .parse()
                .map_err(|e| format!("bad denominator {q:?}: {e}"))?;
            if den == 0 {
                return Err("zero denominator".into());
            }
            Ok(Rational::new(num, den))
        }
        None => {
            let num: i128 = s.parse().map_err(|e| format!("bad integer {s:?}: {e}"))?;
            Ok(Rational::from_integer(num))
        }
    }
}

/// Converts to `f64` for display purposes only (never for comparisons).
pub fn ratio_to_f64(r: Rational) -> f64 {
    *r.numer() as f64 / *r.denom() as f64
}
