use std::io::Write;

use crate::error::{usage, Error, Result};
use crate::par::Exec;
use crate::phase::Phase;

use super::approx::raw_threshold;

/// Observed `max_n ‖k x_n‖` for one `k`.
#[derive(Debug, Clone, PartialEq)]
pub struct SeparationRow {
    pub k: u64,
    pub sup_norm: f64,
    /// 1-based index attaining the maximum (first one on ties).
    pub n_argmax: usize,
    pub below_fifth: bool,
}

/// Finite-orbit lower bounds for `sup_n ‖k x_n‖` over a range of `k`.
#[derive(Debug, Clone, PartialEq)]
pub struct SeparationReport {
    pub rows: Vec<SeparationRow>,
    /// Smallest `k` in range from which every observed maximum is `≥ 1/5`.
    pub observed_k0: Option<u64>,
}

impl SeparationReport {
    pub fn below_fifth(&self) -> impl Iterator<Item = u64> + '_ {
        self.rows.iter().filter(|r| r.below_fifth).map(|r| r.k)
    }

    /// Writes `k,sup_norm,n_argmax`.
    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(out);
        let io = |e: csv::Error| Error::Parse(e.to_string());
        w.write_record(["k", "sup_norm", "n_argmax"]).map_err(io)?;
        for r in &self.rows {
            w.write_record([r.k.to_string(), format!("{:.17}", r.sup_norm), r.n_argmax.to_string()]).map_err(io)?;
        }
        w.flush().map_err(|e| Error::Parse(e.to_string()))
    }
}

pub fn kxn_separation(xtilde: &[Phase], k_min: u64, k_max: u64) -> Result<SeparationReport> {
    kxn_separation_with(xtilde, k_min, k_max, Exec::default())
}

pub fn kxn_separation_with(xtilde: &[Phase], k_min: u64, k_max: u64, exec: Exec) -> Result<SeparationReport> {
    if xtilde.is_empty() {
        return usage("separation diagnostic needs a nonempty sequence");
    }
    if k_min > k_max {
        return usage(format!("empty k range [{k_min}, {k_max}]"));
    }
    let fifth = raw_threshold(5);
    let count = (k_max - k_min + 1) as usize;
    let rows = exec.map_range(count, |i| {
        let k = k_min + i as u64;
        let (mut best, mut arg) = (0u128, 0usize);
        for (n, x) in xtilde.iter().enumerate() {
            let v = x.mul_int(k).norm_raw();
            if v > best || n == 0 {
                best = v;
                arg = n;
            }
        }
        // norm ≥ 1/5 exactly when raw > floor(2^128 / 5)
        SeparationRow { k, sup_norm: Phase(best).to_f64(), n_argmax: arg + 1, below_fifth: best <= fifth }
    });
    let observed_k0 = match rows.iter().rposition(|r| r.below_fifth) {
        None => Some(k_min),
        Some(i) if i + 1 < rows.len() => Some(rows[i + 1].k),
        Some(_) => None,
    };
    Ok(SeparationReport { rows, observed_k0 })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::phase::phase_of_fraction;

    #[test]
    fn degenerate_orbit() {
        let r = kxn_separation(&[Phase::ZERO; 5], 1, 10).unwrap();
        assert!(r.rows.iter().all(|r| r.sup_norm == 0.0 && r.below_fifth));
        assert_eq!(r.observed_k0, None);
    }

    #[test]
    fn sevenths() {
        let xs: Vec<Phase> = (1..=20).map(|n| phase_of_fraction(n, 7, 128)).collect();
        let r = kxn_separation(&xs, 1, 7).unwrap();
        assert!((r.rows[0].sup_norm - 3.0 / 7.0).abs() < 1e-15);
        assert_eq!(r.rows[0].n_argmax, 3);
        assert!(r.rows[6].sup_norm < 1e-30 && r.rows[6].below_fifth);
        assert_eq!(r.observed_k0, None);
        let r = kxn_separation(&xs, 1, 6).unwrap();
        assert_eq!(r.observed_k0, Some(1));
    }

    #[test]
    fn csv_and_modes() {
        let xs: Vec<Phase> = (1..=50).map(|n| phase_of_fraction(n * n, 101, 128)).collect();
        let a = kxn_separation_with(&xs, 1, 40, Exec::Sequential).unwrap();
        assert_eq!(a, kxn_separation_with(&xs, 1, 40, Exec::Parallel).unwrap());
        let mut buf = Vec::new();
        a.write_csv(&mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert!(text.starts_with("k,sup_norm,n_argmax\n1,"));
        assert_eq!(text.lines().count(), 41);
    }
}
