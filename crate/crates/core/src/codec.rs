//! Embedding and extraction over an abstract cover bit stream.
//!
//! Each block of `n_len` cover bits carries `p = n_len - k` message bits as
//! its syndrome. Embedding adds the coset leader of `m - H·t`, so at most
//! `rho` bits change per block.
//!
//! The payload travels in a frame: a 32-bit big-endian count of payload
//! bits, the payload bits MSB-first per byte, then zero padding up to a
//! multiple of `p`.

use crate::decoder::CosetTable;
use crate::error::{Error, Result};
use crate::exec::Execution;
use crate::gf2::BitVector;
use crate::graph::GraphicalCode;

pub const HEADER_BITS: usize = 32;

/// Embeds one message chunk into one cover block. Returns the stego block
/// and the number of flipped bits.
pub fn embed_block(t: &BitVector, m: &BitVector, table: &CosetTable) -> Result<(BitVector, usize)> {
    if t.len() != table.n_len() {
        return Err(Error::Dimension {
            op: "cover block",
            expected: table.n_len(),
            found: t.len(),
        });
    }
    if m.len() != table.p() {
        return Err(Error::Dimension {
            op: "message chunk",
            expected: table.p(),
            found: m.len(),
        });
    }
    let s = table.parity_check().mul_vec(t)?.add(m)?;
    if s.is_zero() {
        return Ok((t.clone(), 0));
    }
    let e = table.leader(&s)?;
    Ok((t.add(e)?, e.weight()))
}

/// Reads the message chunk carried by a stego block: `H·v`.
pub fn extract_block(v: &BitVector, code: &GraphicalCode) -> Result<BitVector> {
    code.syndrome(v)
}

/// Bytes to bits, most significant bit first.
pub fn bytes_to_bits(bytes: &[u8]) -> BitVector {
    BitVector::from_bits(
        bytes
            .iter()
            .flat_map(|&b| (0..8).rev().map(move |i| (b >> i) & 1)),
    )
}

/// Bits to bytes, most significant bit first; a short final byte is
/// zero-filled.
pub fn bits_to_bytes(bits: &BitVector) -> Vec<u8> {
    let mut out = vec![0u8; bits.len().div_ceil(8)];
    for i in bits.support() {
        out[i / 8] |= 0x80 >> (i % 8);
    }
    out
}

/// Length of the framed stream for `payload_bits` bits and chunk size `p`.
pub fn framed_len(payload_bits: usize, p: usize) -> usize {
    (HEADER_BITS + payload_bits).div_ceil(p) * p
}

pub fn frame_payload(data: &BitVector, p: usize) -> Result<BitVector> {
    if p == 0 {
        return Err(Error::Invariant("chunk size must be positive".into()));
    }
    let declared = u32::try_from(data.len()).map_err(|_| Error::Limit {
        what: "payload bits",
        value: data.len(),
        limit: u32::MAX as usize,
        hint: "split the payload",
    })?;
    let mut out = BitVector::from_index(declared as u64, HEADER_BITS);
    out.extend_from(data);
    let total = framed_len(data.len(), p);
    while out.len() < total {
        out.push(false);
    }
    Ok(out)
}

fn declared_len(framed: &BitVector) -> Result<usize> {
    if framed.len() < HEADER_BITS {
        return Err(Error::CorruptFrame(format!(
            "{} bits is shorter than the {HEADER_BITS}-bit header",
            framed.len()
        )));
    }
    Ok(framed.slice(0, HEADER_BITS).to_index() as usize)
}

pub fn unframe_payload(framed: &BitVector) -> Result<BitVector> {
    let len = declared_len(framed)?;
    let available = framed.len() - HEADER_BITS;
    if len > available {
        return Err(Error::CorruptFrame(format!(
            "header declares {len} payload bits but only {available} follow"
        )));
    }
    Ok(framed.slice(HEADER_BITS, len))
}

/// Per-stream embedding statistics.
#[derive(Debug, Clone, PartialEq)]
pub struct EmbedReport {
    pub blocks_used: usize,
    pub embedded_bits: usize,
    pub total_flips: usize,
    pub max_flips_per_block: usize,
    pub rho: usize,
    pub embedding_rate: f64,
    pub theoretical_efficiency: f64,
    /// `embedded_bits / total_flips`; `None` when nothing was flipped.
    pub empirical_efficiency: Option<f64>,
}

impl EmbedReport {
    pub fn mean_flips_per_block(&self) -> f64 {
        if self.blocks_used == 0 {
            0.0
        } else {
            self.total_flips as f64 / self.blocks_used as f64
        }
    }
}

/// Frames `data` and embeds it block by block from cover bit 0. Cover bits
/// past the last used block are copied unchanged.
pub fn embed_stream(
    cover: &BitVector,
    data: &BitVector,
    table: &CosetTable,
    exec: Execution,
) -> Result<(BitVector, EmbedReport)> {
    let (n, p) = (table.n_len(), table.p());
    let framed = frame_payload(data, p)?;
    let blocks = framed.len() / p;
    let required = blocks * n;
    if required > cover.len() {
        return Err(Error::Capacity {
            required,
            available: cover.len(),
        });
    }

    let results = exec.map_range(blocks, |b| {
        embed_block(&cover.slice(b * n, n), &framed.slice(b * p, p), table)
    });

    let mut stego = cover.clone();
    let mut total_flips = 0;
    let mut max_flips = 0;
    for (b, r) in results.into_iter().enumerate() {
        let (v, flips) = r?;
        stego.splice(b * n, &v);
        total_flips += flips;
        max_flips = max_flips.max(flips);
    }
    let metrics = compute_metrics(n, p, table.rho())?;
    let embedded_bits = blocks * p;
    let report = EmbedReport {
        blocks_used: blocks,
        embedded_bits,
        total_flips,
        max_flips_per_block: max_flips,
        rho: table.rho(),
        embedding_rate: metrics.embedding_rate,
        theoretical_efficiency: metrics.embedding_efficiency,
        empirical_efficiency: (total_flips > 0).then(|| embedded_bits as f64 / total_flips as f64),
    };
    Ok((stego, report))
}

/// Recovers the payload embedded by [`embed_stream`].
pub fn extract_stream(stego: &BitVector, code: &GraphicalCode) -> Result<BitVector> {
    let (n, p) = (code.n_len(), code.p());
    let header_blocks = HEADER_BITS.div_ceil(p);
    if stego.len() < header_blocks * n {
        return Err(Error::CorruptFrame(format!(
            "stream of {} bits cannot hold the frame header ({} bits needed)",
            stego.len(),
            header_blocks * n
        )));
    }
    let read_blocks = |from: usize, to: usize, out: &mut BitVector| -> Result<()> {
        for b in from..to {
            out.extend_from(&extract_block(&stego.slice(b * n, n), code)?);
        }
        Ok(())
    };
    let mut framed = BitVector::zeros(0);
    read_blocks(0, header_blocks, &mut framed)?;
    let len = declared_len(&framed)?;
    let blocks = framed_len(len, p) / p;
    if blocks * n > stego.len() {
        return Err(Error::CorruptFrame(format!(
            "header declares {len} payload bits needing {} stego bits, only {} present",
            blocks * n,
            stego.len()
        )));
    }
    read_blocks(header_blocks, blocks, &mut framed)?;
    unframe_payload(&framed)
}

/// Embedding rate and efficiency of an `[n, p, rho]` protocol.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Metrics {
    pub embedding_rate: f64,
    pub embedding_efficiency: f64,
}

/// `ER = p / n_len`, `EF = p / rho`.
pub fn compute_metrics(n_len: usize, p: usize, rho: usize) -> Result<Metrics> {
    if n_len == 0 || p == 0 {
        return Err(Error::Invariant("code length and message bits must be positive".into()));
    }
    if rho == 0 {
        return Err(Error::Invariant(
            "covering radius 0 leaves embedding efficiency undefined".into(),
        ));
    }
    Ok(Metrics {
        embedding_rate: p as f64 / n_len as f64,
        embedding_efficiency: p as f64 / rho as f64,
    })
}

/// Rounds half away from zero to two decimals, as printed in reports.
pub fn round2(x: f64) -> f64 {
    (x * 100.0).round() / 100.0
}

/// Parameters of a cycle code used as an `[n_len, p, rho]` protocol.
#[derive(Debug, Clone, PartialEq)]
pub struct CodeReport {
    pub n_len: usize,
    pub k: usize,
    pub d: usize,
    pub girth: usize,
    pub rho: usize,
    pub p: usize,
    pub embedding_rate: f64,
    pub embedding_efficiency: f64,
}

impl CodeReport {
    pub fn new(code: &GraphicalCode, rho: usize) -> Result<Self> {
        let m = compute_metrics(code.n_len(), code.p(), rho)?;
        Ok(Self {
            n_len: code.n_len(),
            k: code.k(),
            d: code.d(),
            girth: code.graph().girth().unwrap_or(0),
            rho,
            p: code.p(),
            embedding_rate: m.embedding_rate,
            embedding_efficiency: m.embedding_efficiency,
        })
    }

    /// `n=10 k=6 d=3 p=4 rho=2 ER=0.40 EF=2.00`
    pub fn summary_line(&self) -> String {
        format!(
            "n={} k={} d={} p={} rho={} ER={:.2} EF={:.2}",
            self.n_len,
            self.k,
            self.d,
            self.p,
            self.rho,
            round2(self.embedding_rate),
            round2(self.embedding_efficiency)
        )
    }
}
