//! Grand-canonical Monte Carlo: independent mode occupations per draw.

use std::io::{BufRead, Read, Write};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use sha2::{Digest, Sha256};

use crate::error::{domain, Error, Result};
use crate::gas_model::{GasSpec, Statistics, ThermoPoint};
use crate::lattice_sums::{discrete_sum_n_detailed, enumerate_modes, ModeCutoff, TailPolicy};

pub const BATCH_MAGIC: &[u8; 4] = b"QGFB";
pub const BATCH_VERSION: u16 = 1;

/// Largest expected particle count allowed beyond the cutoff.
const SAMPLER_TAIL: f64 = 1e-10;

/// One measurement outcome: total particle number and energy.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Draw {
    pub n: u64,
    pub e: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SampleBatch {
    pub draws: Vec<Draw>,
    pub m: usize,
    pub seed: u64,
    /// Hex digest of the spec, point and cutoff that produced the batch.
    pub spec_hash: String,
    /// Mode cutoff the draws were generated with. Likelihoods must use the
    /// same spectrum.
    pub max_index: usize,
}

impl SampleBatch {
    pub fn from_draws(draws: Vec<Draw>, seed: u64, spec_hash: String, max_index: usize) -> Result<Self> {
        if draws.is_empty() {
            return domain("batch is empty");
        }
        Ok(SampleBatch { m: draws.len(), draws, seed, spec_hash, max_index })
    }

    pub fn mean_n(&self) -> f64 {
        self.draws.iter().map(|d| d.n as f64).sum::<f64>() / self.m as f64
    }

    pub fn mean_e(&self) -> f64 {
        self.draws.iter().map(|d| d.e).sum::<f64>() / self.m as f64
    }

    /// Sample variance of N (unbiased).
    pub fn var_n(&self) -> f64 {
        let mean = self.mean_n();
        let ss: f64 = self.draws.iter().map(|d| (d.n as f64 - mean).powi(2)).sum();
        ss / (self.m as f64 - 1.0).max(1.0)
    }

    pub fn write_csv<W: Write>(&self, mut w: W) -> std::io::Result<()> {
        writeln!(w, "draw_index,n,e")?;
        for (i, d) in self.draws.iter().enumerate() {
            writeln!(w, "{i},{},{:e}", d.n, d.e)?;
        }
        Ok(())
    }

    /// Magic, u16 version, u64 m, then (u64 n, f64 e) pairs, all little-endian.
    pub fn write_binary<W: Write>(&self, mut w: W) -> std::io::Result<()> {
        w.write_all(BATCH_MAGIC)?;
        w.write_all(&BATCH_VERSION.to_le_bytes())?;
        w.write_all(&(self.m as u64).to_le_bytes())?;
        for d in &self.draws {
            w.write_all(&d.n.to_le_bytes())?;
            w.write_all(&d.e.to_le_bytes())?;
        }
        Ok(())
    }
}

fn format_err(msg: impl Into<String>) -> Error {
    Error::Format(msg.into())
}

/// Reads the draws of a binary batch.
pub fn read_binary<R: Read>(mut r: R) -> Result<Vec<Draw>> {
    let mut head = [0u8; 14];
    r.read_exact(&mut head).map_err(|e| format_err(e.to_string()))?;
    if &head[..4] != BATCH_MAGIC {
        return Err(format_err("bad magic"));
    }
    let version = u16::from_le_bytes([head[4], head[5]]);
    if version != BATCH_VERSION {
        return Err(format_err(format!("unsupported version {version}")));
    }
    let m = u64::from_le_bytes(head[6..14].try_into().unwrap());
    let mut out = Vec::with_capacity(m.min(1 << 24) as usize);
    let mut buf = [0u8; 16];
    for i in 0..m {
        r.read_exact(&mut buf).map_err(|_| format_err(format!("truncated at draw {i} of {m}")))?;
        let n = u64::from_le_bytes(buf[..8].try_into().unwrap());
        let e = f64::from_le_bytes(buf[8..].try_into().unwrap());
        out.push(Draw { n, e });
    }
    let mut rest = [0u8; 1];
    if r.read(&mut rest).map_err(|e| format_err(e.to_string()))? != 0 {
        return Err(format_err("trailing bytes after last draw"));
    }
    Ok(out)
}

/// Reads the draws of a CSV batch (header `draw_index,n,e`).
pub fn read_csv<R: BufRead>(r: R) -> Result<Vec<Draw>> {
    let mut lines = r.lines();
    let header = lines.next().ok_or_else(|| format_err("empty file"))?.map_err(|e| format_err(e.to_string()))?;
    if header.trim() != "draw_index,n,e" {
        return Err(format_err(format!("unexpected header {header:?}")));
    }
    let mut out = Vec::new();
    for (k, line) in lines.enumerate() {
        let line = line.map_err(|e| format_err(e.to_string()))?;
        if line.trim().is_empty() {
            continue;
        }
        let cols: Vec<&str> = line.split(',').collect();
        if cols.len() != 3 {
            return Err(format_err(format!("line {}: expected 3 columns", k + 2)));
        }
        let idx: usize = cols[0].trim().parse().map_err(|_| format_err(format!("line {}: bad index", k + 2)))?;
        if idx != out.len() {
            return Err(format_err(format!("line {}: draw index {idx} out of order", k + 2)));
        }
        let n = cols[1].trim().parse().map_err(|_| format_err(format!("line {}: bad count", k + 2)))?;
        let e = cols[2].trim().parse().map_err(|_| format_err(format!("line {}: bad energy", k + 2)))?;
        out.push(Draw { n, e });
    }
    Ok(out)
}

pub(crate) fn spec_hash(spec: &GasSpec, pt: &ThermoPoint, max_index: usize) -> String {
    let mut h = Sha256::new();
    h.update(format!("{:?}|{:e}|{:e}|{}", spec, pt.beta, pt.mu, max_index).as_bytes());
    h.finalize().iter().take(8).map(|b| format!("{b:02x}")).collect()
}

/// A mode prepared for sampling: its energy, multiplicity and the
/// threshold q (Bose ratio e^{-β(ε-μ)} or Fermi occupation).
struct SampleMode {
    e: f64,
    w: u64,
    q: f64,
    inv_ln_q: f64,
}

/// Uniform in (0, 1], a multiple of 2⁻⁵³.
fn uniform(rng: &mut ChaCha8Rng) -> f64 {
    1.0 - rng.gen::<f64>()
}

/// Draws `m` independent samples of (N, E).
///
/// Draw i uses ChaCha8 keyed by `seed` on stream i, and consumes one
/// uniform per mode in order of increasing energy. Bose occupations are
/// geometric by inversion, n = ⌊ln U / ln q⌋; fermion occupations are
/// U ≤ p. Modes with q < 2⁻⁵³ can never be occupied under this scheme and
/// trail the energy order, so they are dropped without changing any draw.
pub fn sample_grand_canonical(
    spec: &GasSpec,
    pt: &ThermoPoint,
    m: usize,
    seed: u64,
    cutoff: ModeCutoff,
) -> Result<SampleBatch> {
    if m == 0 {
        return domain("batch size must be positive");
    }
    let mut max_index = cutoff.max_index;
    loop {
        let s = discrete_sum_n_detailed(spec, pt, ModeCutoff { max_index, ..cutoff })?;
        max_index = s.max_index;
        if s.tail_bound <= SAMPLER_TAIL {
            break;
        }
        match cutoff.tail_policy {
            TailPolicy::ZetaTail if max_index < 1 << 28 => max_index *= 2,
            _ => return Err(Error::CutoffTooSmall { tail: s.tail_bound, allowed: SAMPLER_TAIL }),
        }
    }
    let mut modes: Vec<SampleMode> = enumerate_modes(spec, max_index)?
        .into_iter()
        .map(|(e, w)| {
            let x = pt.beta * (e - pt.mu);
            let q = match spec.statistics {
                Statistics::Bose => (-x).exp(),
                Statistics::Fermi => 1.0 / (x.exp() + 1.0),
            };
            SampleMode { e, w: w.round() as u64, q, inv_ln_q: 1.0 / q.ln() }
        })
        .collect();
    modes.sort_by(|a, b| a.e.total_cmp(&b.e));
    let cut = 2f64.powi(-53);
    while modes.last().is_some_and(|md| md.q < cut) {
        modes.pop();
    }
    let bose = spec.statistics == Statistics::Bose;
    let draws: Vec<Draw> = (0..m as u64)
        .into_par_iter()
        .map(|i| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(i);
            let (mut n, mut e) = (0u64, 0.0);
            for md in &modes {
                for _ in 0..md.w {
                    let u = uniform(&mut rng);
                    if u > md.q {
                        continue;
                    }
                    let k = if bose { (u.ln() * md.inv_ln_q).floor() as u64 } else { 1 };
                    n += k;
                    e += k as f64 * md.e;
                }
            }
            Draw { n, e }
        })
        .collect();
    Ok(SampleBatch { draws, m, seed, spec_hash: spec_hash(spec, pt, max_index), max_index })
}
