use std::io::Write;

use crate::error::{Error, Result};

use super::profile::{BoxDimEstimate, CoveringProfile};

/// Writes `k,N,log2N,local_slope`; the slope column on row `k` is
/// `log2 N_k − log2 N_{k−1}` and is empty on the first row.
pub fn write_profile_csv<W: Write>(profile: &CoveringProfile, out: W) -> Result<()> {
    let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(out);
    let io = |e: csv::Error| Error::Parse(e.to_string());
    w.write_record(["k", "N", "log2N", "local_slope"]).map_err(io)?;
    let mut prev: Option<f64> = None;
    for (k, n) in profile.scales() {
        let l = (n as f64).log2();
        let slope = prev.map(|p| format!("{:.12}", l - p)).unwrap_or_default();
        w.write_record([k.to_string(), n.to_string(), format!("{l:.12}"), slope]).map_err(io)?;
        prev = Some(l);
    }
    w.flush().map_err(|e| Error::Parse(e.to_string()))
}

/// Log-log plot of the profile with the fitted global slope.
pub fn profile_svg(profile: &CoveringProfile, estimate: Option<&BoxDimEstimate>) -> String {
    let (w, h, m) = (480.0, 320.0, 40.0);
    let pts: Vec<(f64, f64)> = profile.scales().map(|(k, n)| (f64::from(k), (n as f64).log2())).collect();
    let (x0, x1) = (f64::from(profile.k_min), f64::from(profile.k_max).max(f64::from(profile.k_min) + 1.0));
    let y1 = pts.iter().map(|p| p.1).fold(1.0, f64::max);
    let sx = |x: f64| m + (x - x0) / (x1 - x0) * (w - 2.0 * m);
    let sy = |y: f64| h - m - y / y1 * (h - 2.0 * m);
    let mut s = format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{w}\" height=\"{h}\" viewBox=\"0 0 {w} {h}\">\n\
         <rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n\
         <line x1=\"{m}\" y1=\"{b}\" x2=\"{r}\" y2=\"{b}\" stroke=\"black\"/>\n\
         <line x1=\"{m}\" y1=\"{m}\" x2=\"{m}\" y2=\"{b}\" stroke=\"black\"/>\n\
         <text x=\"{cx}\" y=\"{ty}\" font-size=\"12\" text-anchor=\"middle\">k</text>\n\
         <text x=\"12\" y=\"{cy}\" font-size=\"12\">log2 N</text>\n",
        b = h - m,
        r = w - m,
        cx = w / 2.0,
        ty = h - 8.0,
        cy = h / 2.0,
    );
    let path: Vec<String> = pts.iter().map(|&(x, y)| format!("{:.2},{:.2}", sx(x), sy(y))).collect();
    s += &format!("<polyline fill=\"none\" stroke=\"steelblue\" stroke-width=\"1.5\" points=\"{}\"/>\n", path.join(" "));
    for &(x, y) in &pts {
        s += &format!("<circle cx=\"{:.2}\" cy=\"{:.2}\" r=\"2.5\" fill=\"steelblue\"/>\n", sx(x), sy(y));
    }
    if let Some(e) = estimate {
        let n = pts.len() as f64;
        let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
        let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
        let at = |x: f64| my + e.slope_global * (x - mx);
        s += &format!(
            "<line x1=\"{:.2}\" y1=\"{:.2}\" x2=\"{:.2}\" y2=\"{:.2}\" stroke=\"firebrick\" stroke-dasharray=\"4 3\"/>\n\
             <text x=\"{}\" y=\"{}\" font-size=\"12\">slope {:.4}</text>\n",
            sx(x0),
            sy(at(x0)),
            sx(x1),
            sy(at(x1)),
            m + 8.0,
            m + 4.0,
            e.slope_global
        );
    }
    s + "</svg>\n"
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::boxdim::{box_dim_estimate, covering_profile};
    use crate::phase::phase_of_fraction;

    #[test]
    fn csv_layout() {
        let pts: Vec<_> = (0..4).map(|i| phase_of_fraction(i, 4, 128)).collect();
        let p = covering_profile(&pts, 1, 3).unwrap();
        let mut buf = Vec::new();
        write_profile_csv(&p, &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines[0], "k,N,log2N,local_slope");
        assert_eq!(lines[1], "1,2,1.000000000000,");
        assert_eq!(lines[2], "2,4,2.000000000000,1.000000000000");
        assert_eq!(lines[3], "3,4,2.000000000000,0.000000000000");
    }

    #[test]
    fn svg_is_well_formed() {
        let pts: Vec<_> = (0..64).map(|i| phase_of_fraction(i, 64, 128)).collect();
        let p = covering_profile(&pts, 1, 8).unwrap();
        let e = box_dim_estimate(&p).unwrap();
        let svg = profile_svg(&p, Some(&e));
        assert!(svg.starts_with("<svg") && svg.trim_end().ends_with("</svg>"));
        assert_eq!(svg.matches("<circle").count(), 8);
    }
}
