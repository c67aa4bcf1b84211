//! Exhaustive scans over `P_n` for odd `n`.
//!
//! Candidates are split into contiguous index blocks; each block is evaluated
//! in parallel and records are yielded in index order, so output does not
//! depend on the worker count.

use std::collections::VecDeque;
use std::io::Write;
use std::str::FromStr;

use num_traits::ToPrimitive;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::gf2poly::F2Poly;
use crate::order_beta::{self, gap_within_bound};

/// Candidates evaluated per parallel batch.
const BLOCK: usize = 2048;

/// Column order of the CSV output.
pub const CSV_HEADER: &str =
    "n,poly,degree,order,order_exact,ell1,ell0,gamma_num,gamma_den,robust,gap,bound_ok,status";

/// Column order of the figure CSV.
pub const FIGURE_HEADER: &str = "n,gamma_num,gamma_den,gamma_decimal";

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Extent {
    /// Every polynomial of degree at most the bound.
    DegreeMax(u32),
    /// Every `P_n` with `n` below the bound.
    IndexMax(u64),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Shape {
    All,
    Trinomial,
    Quadrinomial,
}

impl Shape {
    fn admits(self, n: u64) -> bool {
        match self {
            Shape::All => true,
            Shape::Trinomial => n.count_ones() == 3,
            Shape::Quadrinomial => n.count_ones() == 4,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ScanConfig {
    pub extent: Extent,
    pub shape: Shape,
    /// Cap on each order scan; `None` scans up to `2^deg - 1`, which always succeeds.
    pub order_bound: Option<u64>,
    pub robust_only: bool,
    /// Emit records whose order scan hit `order_bound`.
    pub keep_unresolved: bool,
    pub jobs: usize,
}

impl ScanConfig {
    pub fn new(extent: Extent, shape: Shape) -> Self {
        Self {
            extent,
            shape,
            order_bound: None,
            robust_only: false,
            keep_unresolved: true,
            jobs: 1,
        }
    }
}

/// The four standard corpora.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Preset {
    /// Trinomials of degree at most 19.
    Trinomials19,
    /// Quadrinomials of degree at most 18.
    Quadrinomials18,
    /// All polynomials of degree at most 14.
    Degree14,
    /// Polynomials of order at most 83, among those of degree at most [`ORDER83_DEGREE_MAX`].
    Order83,
}

/// Degree extent searched by [`Preset::Order83`].
pub const ORDER83_DEGREE_MAX: u32 = 20;

impl Preset {
    pub fn config(self) -> ScanConfig {
        match self {
            Preset::Trinomials19 => ScanConfig::new(Extent::DegreeMax(19), Shape::Trinomial),
            Preset::Quadrinomials18 => ScanConfig::new(Extent::DegreeMax(18), Shape::Quadrinomial),
            Preset::Degree14 => ScanConfig::new(Extent::DegreeMax(14), Shape::All),
            Preset::Order83 => ScanConfig {
                order_bound: Some(83),
                keep_unresolved: false,
                ..ScanConfig::new(Extent::DegreeMax(ORDER83_DEGREE_MAX), Shape::All)
            },
        }
    }
}

impl FromStr for Preset {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "trinomials19" => Ok(Preset::Trinomials19),
            "quadrinomials18" => Ok(Preset::Quadrinomials18),
            "degree14" => Ok(Preset::Degree14),
            "order83" => Ok(Preset::Order83),
            _ => Err(Error::Parse {
                token: s.to_string(),
                reason: "unknown preset".into(),
            }),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Ok,
    /// The order scan hit its cap.
    Unresolved,
    /// The constant polynomial 1, which has no order.
    Degenerate,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ScanRecord {
    pub n: u64,
    pub poly: String,
    pub degree: u32,
    pub order: Option<u64>,
    pub order_exact: bool,
    pub ell1: Option<u64>,
    pub ell0: Option<u64>,
    pub gamma_num: Option<u64>,
    pub gamma_den: Option<u64>,
    pub robust: bool,
    pub gap: Option<u64>,
    pub bound_ok: Option<bool>,
    pub status: Status,
}

impl ScanRecord {
    fn unresolved(n: u64, poly: &F2Poly, status: Status) -> Self {
        Self {
            n,
            poly: poly.to_string(),
            degree: poly.degree().unwrap_or(0) as u32,
            order: None,
            order_exact: false,
            ell1: None,
            ell0: None,
            gamma_num: None,
            gamma_den: None,
            robust: false,
            gap: None,
            bound_ok: None,
            status,
        }
    }

    pub fn beta(&self) -> Option<(u64, u64)> {
        Some((self.ell1?, self.ell0?))
    }

    pub fn gamma(&self) -> Option<(u64, u64)> {
        Some((self.gamma_num?, self.gamma_den?))
    }
}

/// Evaluates one `P_n`.
pub fn record(n: u64, order_bound: Option<u64>) -> ScanRecord {
    let f = F2Poly::from_index(n);
    if f.degree().unwrap_or(0) == 0 || !f.constant_term() {
        return ScanRecord::unresolved(n, &f, Status::Degenerate);
    }
    let rep = match order_beta::beta_bounded(&f, order_bound) {
        Ok(rep) => rep,
        Err(_) => return ScanRecord::unresolved(n, &f, Status::Unresolved),
    };
    let degree = f.degree().unwrap() as u32;
    let gap = rep.gap();
    ScanRecord {
        n,
        poly: f.to_string(),
        degree,
        order: Some(rep.period),
        order_exact: rep.order_exact,
        ell1: Some(rep.ell1),
        ell0: Some(rep.ell0),
        gamma_num: rep.gamma.numer().to_u64(),
        gamma_den: rep.gamma.denom().to_u64(),
        robust: rep.robust,
        gap: Some(gap),
        bound_ok: Some(gap_within_bound(gap, degree)),
        status: Status::Ok,
    }
}

fn sparse_indices(degree_max: u32, inner_terms: usize) -> Vec<u64> {
    let mut out = Vec::new();
    for k in 1..=degree_max {
        let top = 1u64 | (1u64 << k);
        match inner_terms {
            1 => out.extend((1..k).map(|a| top | (1u64 << a))),
            2 => {
                for b in 2..k {
                    out.extend((1..b).map(|a| top | (1u64 << a) | (1u64 << b)));
                }
            }
            _ => unreachable!(),
        }
    }
    out.sort_unstable();
    out
}

/// Odd candidate indices in increasing order.
pub fn candidates(config: &ScanConfig) -> Result<Vec<u64>> {
    match config.extent {
        Extent::DegreeMax(d) if d > 62 => Err(Error::InvalidArgument(format!(
            "degree bound {d} exceeds 62"
        ))),
        Extent::DegreeMax(d) => Ok(match config.shape {
            Shape::All => (1..1u64 << (d + 1)).step_by(2).collect(),
            Shape::Trinomial => sparse_indices(d, 1),
            Shape::Quadrinomial => sparse_indices(d, 2),
        }),
        Extent::IndexMax(m) => Ok((1..m)
            .step_by(2)
            .filter(|&n| config.shape.admits(n))
            .collect()),
    }
}

/// Lazily evaluated, index-ordered scan.
pub struct Scan {
    config: ScanConfig,
    pool: rayon::ThreadPool,
    indices: Vec<u64>,
    next_block: usize,
    buffer: VecDeque<ScanRecord>,
}

impl Scan {
    /// Number of candidates evaluated so far, and the total.
    pub fn progress(&self) -> (usize, usize) {
        (
            (self.next_block * BLOCK).min(self.indices.len()),
            self.indices.len(),
        )
    }

    fn keep(&self, rec: &ScanRecord) -> bool {
        if rec.status == Status::Unresolved && !self.config.keep_unresolved {
            return false;
        }
        !self.config.robust_only || rec.robust
    }
}

impl Iterator for Scan {
    type Item = ScanRecord;

    fn next(&mut self) -> Option<ScanRecord> {
        while self.buffer.is_empty() {
            let start = self.next_block * BLOCK;
            if start >= self.indices.len() {
                return None;
            }
            let end = (start + BLOCK).min(self.indices.len());
            let bound = self.config.order_bound;
            let block = &self.indices[start..end];
            let recs: Vec<ScanRecord> = self
                .pool
                .install(|| block.par_iter().map(|&n| record(n, bound)).collect());
            self.next_block += 1;
            let kept: Vec<ScanRecord> = recs.into_iter().filter(|r| self.keep(r)).collect();
            self.buffer.extend(kept);
        }
        self.buffer.pop_front()
    }
}

pub fn scan(config: ScanConfig) -> Result<Scan> {
    let indices = candidates(&config)?;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(config.jobs.max(1))
        .build()
        .map_err(|e| Error::InvalidArgument(e.to_string()))?;
    Ok(Scan {
        config,
        pool,
        indices,
        next_block: 0,
        buffer: VecDeque::new(),
    })
}

pub fn write_csv<W: Write, I: IntoIterator<Item = ScanRecord>>(out: W, records: I) -> Result<()> {
    let mut w = csv::WriterBuilder::new()
        .has_headers(false)
        .from_writer(out);
    let io = |e: csv::Error| Error::InvalidArgument(format!("write failed: {e}"));
    w.write_record(CSV_HEADER.split(',')).map_err(io)?;
    for rec in records {
        w.serialize(rec).map_err(io)?;
    }
    w.flush()
        .map_err(|e| Error::InvalidArgument(format!("write failed: {e}")))
}

pub fn write_jsonl<W: Write, I: IntoIterator<Item = ScanRecord>>(
    mut out: W,
    records: I,
) -> Result<()> {
    for rec in records {
        let line = serde_json::to_string(&rec).expect("records serialize");
        writeln!(out, "{line}")
            .map_err(|e| Error::InvalidArgument(format!("write failed: {e}")))?;
    }
    Ok(())
}

#[derive(Debug, Clone, PartialEq)]
pub struct FigureRow {
    pub n: u64,
    pub gamma_num: u64,
    pub gamma_den: u64,
    pub gamma_decimal: f64,
}

/// Points `(n, gamma(P_n))` for odd `n` in `[5, index_max)`.
pub fn figure_data(index_max: u64, jobs: usize) -> Result<Vec<FigureRow>> {
    if index_max < 5 {
        return Err(Error::InvalidArgument(format!(
            "index_max must be at least 5, got {index_max}"
        )));
    }
    let config = ScanConfig {
        jobs,
        ..ScanConfig::new(Extent::IndexMax(index_max), Shape::All)
    };
    scan(config)?
        .filter(|r| r.n >= 5)
        .map(|r| {
            let (num, den) = r.gamma().ok_or(Error::BoundExceeded {
                bound: order_beta::default_scan_bound(r.degree as usize),
            })?;
            Ok(FigureRow {
                n: r.n,
                gamma_num: num,
                gamma_den: den,
                gamma_decimal: num as f64 / den as f64,
            })
        })
        .collect()
}

pub fn write_figure_csv<W: Write>(mut out: W, rows: &[FigureRow]) -> Result<()> {
    let io = |e: std::io::Error| Error::InvalidArgument(format!("write failed: {e}"));
    writeln!(out, "{FIGURE_HEADER}").map_err(io)?;
    for r in rows {
        writeln!(
            out,
            "{},{},{},{:.12}",
            r.n, r.gamma_num, r.gamma_den, r.gamma_decimal
        )
        .map_err(io)?;
    }
    Ok(())
}

/// Largest coordinate gap observed at one degree.
#[derive(Debug, Clone, PartialEq)]
pub struct GapRow {
    pub degree: u32,
    pub max_gap: u64,
    /// Smallest index attaining `max_gap`.
    pub witness: u64,
    pub bound: f64,
    pub ok: bool,
}

pub fn gap_census(degree_max: u32, jobs: usize) -> Result<Vec<GapRow>> {
    let config = ScanConfig {
        jobs,
        ..ScanConfig::new(Extent::DegreeMax(degree_max), Shape::All)
    };
    let mut rows: Vec<GapRow> = (1..=degree_max)
        .map(|k| GapRow {
            degree: k,
            max_gap: 0,
            witness: 0,
            bound: 2f64.powf(k as f64 / 2.0),
            ok: true,
        })
        .collect();
    for rec in scan(config)? {
        let Some(gap) = rec.gap else { continue };
        let row = &mut rows[rec.degree as usize - 1];
        if gap > row.max_gap || row.witness == 0 {
            row.max_gap = gap;
            row.witness = rec.n;
        }
        row.ok &= rec.bound_ok == Some(true);
    }
    Ok(rows)
}
