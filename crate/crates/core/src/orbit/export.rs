//! Orbit file formats.
//!
//! Binary layout (`ORB1`, all integers little-endian):
//!
//! ```text
//! magic  b"ORB1"
//! ell    u32
//! r      u32
//! bits   u32
//! n      u64
//! omega  n bytes, one-based symbols ω_1..ω_n
//! points n+1 fractions x_0..x_n, each ceil(bits/8) bytes, top `bits` bits
//! ```

use std::io::{self, Read, Write};

use super::generate::Orbit;
use crate::phase::Phase;

pub const MAGIC: &[u8; 4] = b"ORB1";

/// Decoded contents of an `ORB1` file.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OrbitFile {
    pub ell: u32,
    pub r: u32,
    pub bits: u32,
    pub omega: Vec<u8>,
    pub points: Vec<Phase>,
}

pub fn write_binary<W: Write>(orbit: &Orbit, mut w: W) -> io::Result<()> {
    let bits = orbit.bits();
    w.write_all(MAGIC)?;
    w.write_all(&(orbit.steps().len() as u32).to_le_bytes())?;
    w.write_all(&(orbit.steps().r() as u32).to_le_bytes())?;
    w.write_all(&bits.to_le_bytes())?;
    w.write_all(&(orbit.len() as u64).to_le_bytes())?;
    let omega: Vec<u8> = orbit.omega_raw().iter().map(|s| s + 1).collect();
    w.write_all(&omega)?;
    for x in orbit.points() {
        w.write_all(&x.to_le_bytes(bits))?;
    }
    w.flush()
}

pub fn read_binary<R: Read>(mut rd: R) -> io::Result<OrbitFile> {
    let bad = |m: &str| io::Error::new(io::ErrorKind::InvalidData, m.to_string());
    let mut magic = [0u8; 4];
    rd.read_exact(&mut magic)?;
    if &magic != MAGIC {
        return Err(bad("not an ORB1 file"));
    }
    let mut u32buf = [0u8; 4];
    let mut next_u32 = |rd: &mut R| -> io::Result<u32> {
        rd.read_exact(&mut u32buf)?;
        Ok(u32::from_le_bytes(u32buf))
    };
    let ell = next_u32(&mut rd)?;
    let r = next_u32(&mut rd)?;
    let bits = next_u32(&mut rd)?;
    if !(1..=128).contains(&bits) {
        return Err(bad("precision out of range"));
    }
    let mut u64buf = [0u8; 8];
    rd.read_exact(&mut u64buf)?;
    let n = u64::from_le_bytes(u64buf) as usize;
    let mut omega = vec![0u8; n];
    rd.read_exact(&mut omega)?;
    let width = bits.div_ceil(8) as usize;
    let mut buf = vec![0u8; width];
    let mut points = Vec::with_capacity(n + 1);
    for _ in 0..=n {
        rd.read_exact(&mut buf)?;
        points.push(Phase::from_le_bytes(&buf, bits));
    }
    Ok(OrbitFile { ell, r, bits, omega, points })
}

/// CSV with columns `n, omega, x_hex, N_1..N_ℓ, b_1..b_r`, one row per
/// `n = 0..=len` (`omega` is empty on the `n = 0` row).
pub fn write_csv<W: Write>(orbit: &Orbit, w: W) -> io::Result<()> {
    let ell = orbit.steps().len();
    let r = orbit.steps().r();
    let mut out = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(w);
    let mut header = vec!["n".to_string(), "omega".to_string(), "x_hex".to_string()];
    header.extend((1..=ell).map(|i| format!("N_{i}")));
    header.extend((1..=r).map(|j| format!("b_{j}")));
    out.write_record(&header)?;
    let counts = orbit.counts();
    let bs = orbit.b_sequences();
    for (n, x) in orbit.points().iter().enumerate() {
        let mut row = Vec::with_capacity(3 + ell + r);
        row.push(n.to_string());
        row.push(if n == 0 { String::new() } else { orbit.symbol(n).to_string() });
        row.push(x.to_hex(orbit.bits()));
        row.extend(counts.iter().map(|c| c[n].to_string()));
        row.extend(bs.iter().map(|b| b[n].to_string()));
        out.write_record(&row)?;
    }
    out.flush()?;
    Ok(())
}
