//! Output number policy shared by the API and the CLI: 9 significant digits,
//! no negative zero, non-finite values become `null`.

use farpoint_core::PlanePoint;

pub const SIG_DIGITS: usize = 9;

/// `x` rounded to 9 significant digits.
pub fn round9(x: f64) -> f64 {
    if !x.is_finite() {
        return x;
    }
    let r: f64 = format!("{:.*e}", SIG_DIGITS - 1, x).parse().unwrap_or(x);
    if r == 0.0 {
        0.0
    } else {
        r
    }
}

/// Rounded number, or `None` (serialized as `null`) when not finite.
pub fn num(x: f64) -> Option<f64> {
    x.is_finite().then(|| round9(x))
}

pub fn pair(p: PlanePoint) -> [f64; 2] {
    [round9(p.x), round9(p.y)]
}

/// Text form with 9 significant digits, trailing zeros removed.
pub fn fmt9(x: f64) -> String {
    if !x.is_finite() {
        return format!("{x}");
    }
    let r = round9(x);
    if r == 0.0 {
        return "0".to_string();
    }
    let exp = r.abs().log10().floor() as i32;
    if !(-5..9).contains(&exp) {
        let s = format!("{:.*e}", SIG_DIGITS - 1, r);
        let (mant, e) = s.split_once('e').unwrap_or((&s, "0"));
        let mant = if mant.contains('.') {
            mant.trim_end_matches('0').trim_end_matches('.')
        } else {
            mant
        };
        return format!("{mant}e{e}");
    }
    let decimals = (SIG_DIGITS as i32 - 1 - exp).max(0) as usize;
    let s = format!("{:.*}", decimals, r);
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.').to_string()
    } else {
        s
    }
}

pub fn fmt_point(p: PlanePoint) -> String {
    format!("({}, {})", fmt9(p.x), fmt9(p.y))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn formatting() {
        assert_eq!(fmt9(2.0 / 3.0), "0.666666667");
        assert_eq!(fmt9(259.0_f64.sqrt() / 6.0), "2.68224616");
        assert_eq!(fmt9(0.8), "0.8");
        assert_eq!(fmt9(-0.0), "0");
        assert_eq!(fmt9(3.0), "3");
        assert_eq!(fmt9(1.5e-12), "1.5e-12");
        assert_eq!(fmt9(123456789012.0), "1.23456789e11");
        assert_eq!(fmt9(0.239123), "0.239123");
        assert_eq!(round9(-1e-20 * 0.0), 0.0);
        assert!(round9(-0.0).is_sign_positive());
        assert_eq!(num(f64::NAN), None);
    }
}
