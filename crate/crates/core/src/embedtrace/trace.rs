use std::io::Write;

use num_rational::BigRational;
use num_traits::One;

use crate::error::{usage, Error, Result};

use super::instance::EmbeddingInstance;

/// One row of the `s_n` trace.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TraceEntry {
    pub n: usize,
    /// `i_n`, 1-based.
    pub symbol: usize,
    pub s_n: u64,
    /// `γ₁^{s_n} / ρ_{i_1…i_n}`.
    pub ratio: BigRational,
    /// `None` when `s_n = 0`, where the lower bound does not apply.
    pub lower_ok: Option<bool>,
    pub upper_ok: bool,
    /// The sampled containment test never passed before the diameter
    /// criterion forced `s_n`.
    pub flagged: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Trace {
    pub entries: Vec<TraceEntry>,
    pub lower_bound: BigRational,
    pub upper_bound: BigRational,
}

impl Trace {
    pub fn all_within_bounds(&self) -> bool {
        self.entries.iter().all(|e| e.upper_ok && e.lower_ok != Some(false))
    }

    /// Writes `n,i_n,s_n,ratio_num,ratio_den,lower_bound_ok,upper_bound_ok,flagged`.
    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(out);
        let io = |e: csv::Error| Error::Parse(e.to_string());
        w.write_record(["n", "i_n", "s_n", "ratio_num", "ratio_den", "lower_bound_ok", "upper_bound_ok", "flagged"]).map_err(io)?;
        for e in &self.entries {
            let lower = e.lower_ok.map_or(String::new(), |b| b.to_string());
            w.write_record([
                e.n.to_string(),
                e.symbol.to_string(),
                e.s_n.to_string(),
                e.ratio.numer().to_string(),
                e.ratio.denom().to_string(),
                lower,
                e.upper_ok.to_string(),
                e.flagged.to_string(),
            ])
            .map_err(io)?;
        }
        w.flush().map_err(|e| Error::Parse(e.to_string()))
    }
}

/// For `n = 1..=n_max`, the least `k ≥ s_{n−1}` such that every
/// depth-`depth` sample point of `m ψ₁^k(F) + b` lies in the coded cylinder
/// `φ_{i_1…i_n}(E)` (tested one refinement cell deep, with one cell of slack).
///
/// The search stops at the least `k` with
/// `|m| γ₁^k diam F < ρ_{i_1…i_{n−1}} δ`, where containment is forced.
pub fn sn_sequence(inst: &EmbeddingInstance, n_max: usize, depth: usize) -> Result<Trace> {
    if n_max > inst.coding.len() {
        return usage(format!("coding has length {}, asked for {n_max}", inst.coding.len()));
    }
    if depth == 0 {
        return usage("sample depth must be at least 1");
    }
    let sample = inst.f.attractor_sample(depth)?;
    let lower_bound = inst.lower_bound();
    let upper_bound = inst.upper_bound();
    let image_diam = |k: u64| &inst.norm * num_traits::pow(inst.gamma1.clone(), k as usize) * &inst.diam_f;

    let contained = |k: u64, n: usize| {
        let cyl = inst.e.word_map(&inst.coding[..n]);
        let tol = inst.e.refinement_cell(depth);
        let psi = inst.psi1.power(k as u32);
        sample.iter().all(|z| {
            let w = &inst.m * psi.apply(z) + &inst.b;
            // pulled back through the cylinder map, the slack is one
            // depth-`depth` cell of E
            inst.e.locate(&cyl.invert(&w), depth, &tol).is_some()
        })
    };

    let mut entries = Vec::with_capacity(n_max);
    let mut prev_s = 0u64;
    let mut rho_prev = BigRational::one();
    for n in 1..=n_max {
        let forced = (prev_s..).find(|&k| image_diam(k) < &rho_prev * &inst.delta).expect("γ₁ < 1");
        let mut k = prev_s;
        let mut flagged = false;
        while !contained(k, n) {
            if k >= forced {
                flagged = true;
                break;
            }
            k += 1;
        }
        let symbol = inst.coding[n - 1];
        let rho_n = &rho_prev * inst.e.maps()[symbol].ratio();
        let ratio = num_traits::pow(inst.gamma1.clone(), k as usize) / &rho_n;
        entries.push(TraceEntry {
            n,
            symbol: symbol + 1,
            s_n: k,
            lower_ok: (k >= 1).then(|| ratio >= lower_bound),
            upper_ok: ratio <= upper_bound,
            ratio,
            flagged,
        });
        prev_s = k;
        rho_prev = rho_n;
    }
    Ok(Trace { entries, lower_bound, upper_bound })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ifs::LineIFS;

    fn r(p: i64, q: i64) -> BigRational {
        BigRational::new(p.into(), q.into())
    }

    #[test]
    fn cantor_pair() {
        let e = LineIFS::middle_third();
        let f = LineIFS::from_triples(&[((1, 9), 1, (0, 1)), ((1, 9), 1, (8, 9))]).unwrap();
        let inst = EmbeddingInstance::new(e, f, r(1, 1), r(0, 1), 12).unwrap();
        let t = sn_sequence(&inst, 12, 6).unwrap();
        for e in &t.entries {
            assert_eq!(e.s_n, e.n.div_ceil(2) as u64, "n = {}", e.n);
            assert!(e.ratio == r(1, 1) || e.ratio == r(1, 3));
            assert!(!e.flagged);
        }
        assert!(t.all_within_bounds());
        assert!(sn_sequence(&inst, 13, 6).is_err());
    }

    #[test]
    fn identity_embedding() {
        let e = LineIFS::middle_third();
        let inst = EmbeddingInstance::new(e.clone(), e, r(1, 1), r(0, 1), 10).unwrap();
        let t = sn_sequence(&inst, 10, 6).unwrap();
        assert!(t.entries.iter().all(|e| e.s_n == e.n as u64 && e.ratio == r(1, 1)));
        let mut buf = Vec::new();
        t.write_csv(&mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert!(text.starts_with("n,i_n,s_n,ratio_num,ratio_den,lower_bound_ok,upper_bound_ok,flagged\n1,1,1,1,1,true,true,false\n"));
    }

    #[test]
    fn shifted_embedding() {
        // x ↦ x/3 + 2/3 sends E onto its right half
        let e = LineIFS::middle_third();
        let inst = EmbeddingInstance::new(e.clone(), e, r(1, 3), r(2, 3), 10).unwrap();
        assert_eq!(inst.coding[..3], [1, 0, 0]);
        let t = sn_sequence(&inst, 10, 6).unwrap();
        assert_eq!(t.entries[0].s_n, 0);
        assert!(t.entries.windows(2).all(|w| w[0].s_n <= w[1].s_n));
        assert!(t.all_within_bounds());
    }
}
