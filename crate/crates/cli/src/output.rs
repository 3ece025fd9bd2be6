//! Data file, manifest and plot-script writers.

use std::fmt::Write as _;
use std::io::{self, Write};

use jcm_core::EntropySeries64;

pub const CSV_HEADER: &str = "gt,S,W_pp,norm";
pub const SIGNIFICANT_DIGITS: usize = 12;

/// `x` with `digits` significant digits, positional notation for moderate
/// exponents and scientific otherwise (like C's `%.12g`).
pub fn fmt_sig(x: f64, digits: usize) -> String {
    if x == 0.0 {
        return "0".into();
    }
    if !x.is_finite() {
        return x.to_string();
    }
    let sci = format!("{:.*e}", digits - 1, x);
    let (mantissa, exp) = sci.split_once('e').expect("exponent present");
    let exp: i32 = exp.parse().expect("integer exponent");
    if exp < -5 || exp >= digits as i32 {
        let mantissa = trim_zeros(mantissa);
        return format!("{mantissa}e{exp}");
    }
    let decimals = (digits as i32 - 1 - exp).max(0) as usize;
    trim_zeros(&format!("{x:.decimals$}")).to_string()
}

fn trim_zeros(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

pub fn write_csv<W: Write>(mut w: W, series: &EntropySeries64) -> io::Result<()> {
    writeln!(w, "{CSV_HEADER}")?;
    for i in 0..series.len() {
        writeln!(
            w,
            "{},{},{},{}",
            fmt_sig(series.gt[i], SIGNIFICANT_DIGITS),
            fmt_sig(series.entropy[i], SIGNIFICANT_DIGITS),
            fmt_sig(series.w_pp[i], SIGNIFICANT_DIGITS),
            fmt_sig(series.norm[i], SIGNIFICANT_DIGITS)
        )?;
    }
    w.flush()
}

/// Standalone matplotlib script plotting `S` and `W_pp + offset` with markers at `markers`.
pub fn plot_script(title: &str, csv_file: &str, image_file: &str, offset: f64, markers: &[f64]) -> String {
    let mut s = String::new();
    let marks = markers.iter().map(|m| format!("{m:.12}")).collect::<Vec<_>>().join(", ");
    let _ = writeln!(s, "#!/usr/bin/env python3");
    let _ = writeln!(s, "import os");
    let _ = writeln!(s);
    let _ = writeln!(s, "import matplotlib");
    let _ = writeln!(s, "matplotlib.use(\"Agg\")");
    let _ = writeln!(s, "import matplotlib.pyplot as plt");
    let _ = writeln!(s, "import numpy as np");
    let _ = writeln!(s);
    let _ = writeln!(s, "here = os.path.dirname(os.path.abspath(__file__))");
    let _ = writeln!(s, "data = np.genfromtxt(os.path.join(here, {csv_file:?}), delimiter=\",\", names=True)");
    let _ = writeln!(s, "offset = {offset:?}");
    let _ = writeln!(s, "markers = [{marks}]");
    let _ = writeln!(s);
    let _ = writeln!(s, "fig, ax = plt.subplots(figsize=(8, 4))");
    let _ = writeln!(s, "ax.plot(data[\"gt\"], data[\"W_pp\"] + offset, color=\"0.6\", lw=0.8, label=\"W++ + %g\" % offset)");
    let _ = writeln!(s, "ax.plot(data[\"gt\"], data[\"S\"], color=\"k\", lw=1.0, label=\"S\")");
    let _ = writeln!(s, "for m in markers:");
    let _ = writeln!(s, "    ax.axvline(m, color=\"tab:red\", ls=\":\", lw=0.8)");
    let _ = writeln!(s, "ax.set_xlabel(\"gt\")");
    let _ = writeln!(s, "ax.set_xlim(data[\"gt\"][0], data[\"gt\"][-1])");
    let _ = writeln!(s, "ax.set_title({title:?})");
    let _ = writeln!(s, "ax.legend(loc=\"upper right\")");
    let _ = writeln!(s, "fig.tight_layout()");
    let _ = writeln!(s, "fig.savefig(os.path.join(here, {image_file:?}), dpi=150)");
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn significant_digits() {
        assert_eq!(fmt_sig(0.0, 12), "0");
        assert_eq!(fmt_sig(1.0, 12), "1");
        assert_eq!(fmt_sig(std::f64::consts::PI, 12), "3.14159265359");
        assert_eq!(fmt_sig(-0.000123456789012345, 12), "-0.000123456789012");
        assert_eq!(fmt_sig(1.5e-14, 12), "1.5e-14");
        assert_eq!(fmt_sig(0.999999999999999, 12), "1");
        assert_eq!(fmt_sig(123456789012345.0, 12), "1.23456789012e14");
        for x in [0.1, 2.0 / 3.0, std::f64::consts::TAU, 1e-9, 0.75] {
            let back: f64 = fmt_sig(x, 12).parse().unwrap();
            assert!(((back - x) / x).abs() < 1e-11);
        }
    }

    #[test]
    fn csv_layout() {
        let s = EntropySeries64 { gt: vec![0.0, 0.5], entropy: vec![0.0, 0.25], w_pp: vec![1.0, 0.5], norm: vec![1.0, 1.0] };
        let mut buf = Vec::new();
        write_csv(&mut buf, &s).unwrap();
        assert_eq!(String::from_utf8(buf).unwrap(), "gt,S,W_pp,norm\n0,0,1,1\n0.5,0.25,0.5,1\n");
    }

    #[test]
    fn plot_script_mentions_inputs() {
        let s = plot_script("fig1a", "fig1a.csv", "fig1a.png", 0.5, &[0.125]);
        assert!(s.contains("\"fig1a.csv\""));
        assert!(s.contains("offset = 0.5"));
        assert!(s.contains("markers = [0.125000000000]"));
    }
}
