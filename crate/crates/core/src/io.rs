//! Number formatting and CSV helpers shared by the exporters.

/// `v` with 12 significant digits, shortest form, '.' separator.
pub fn fmt_num(v: f64) -> String {
    if v == 0.0 {
        return "0".to_string();
    }
    if !v.is_finite() {
        return if v.is_nan() { "nan".into() } else if v > 0.0 { "inf".into() } else { "-inf".into() };
    }
    let exp = v.abs().log10().floor() as i32;
    if (-5..12).contains(&exp) {
        let decimals = (11 - exp).max(0) as usize;
        let s = format!("{v:.decimals$}");
        // rounding can carry into a new digit; that only adds a trailing zero
        trim_zeros(&s)
    } else {
        let s = format!("{v:.11e}");
        let (mant, e) = s.split_once('e').expect("scientific format has an exponent");
        format!("{}e{}", trim_zeros(mant), e)
    }
}

fn trim_zeros(s: &str) -> String {
    if s.contains('.') {
        let t = s.trim_end_matches('0').trim_end_matches('.');
        if t == "-0" {
            "0".into()
        } else {
            t.to_string()
        }
    } else {
        s.to_string()
    }
}

/// CSV text with the given header and rows of numbers.
pub fn csv<'a>(header: &str, rows: impl IntoIterator<Item = &'a [f64]>) -> String {
    let mut out = String::from(header);
    out.push('\n');
    for r in rows {
        let cells: Vec<String> = r.iter().map(|&v| fmt_num(v)).collect();
        out.push_str(&cells.join(","));
        out.push('\n');
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn formats() {
        assert_eq!(fmt_num(0.25), "0.25");
        assert_eq!(fmt_num(1.0), "1");
        assert_eq!(fmt_num(-3.0), "-3");
        assert_eq!(fmt_num(1.0 / 3.0), "0.333333333333");
        assert_eq!(fmt_num(2.0 / 3.0 * 1000.0), "666.666666667");
        assert_eq!(fmt_num(1e-7), "1e-7");
        assert_eq!(fmt_num(1.23456789012345e15), "1.23456789012e15");
        assert_eq!(fmt_num(-1e-13), "-1e-13");
        assert_eq!(fmt_num(0.1 + 0.2), "0.3");
    }

    #[test]
    fn csv_layout() {
        let rows = [[1.0, 0.5], [2.0, 0.0]];
        let s = csv("x,p", rows.iter().map(|r| &r[..]));
        assert_eq!(s, "x,p\n1,0.5\n2,0\n");
    }
}
