//! On-disk formats: the time-series CSV and the MCAC1 binary checkpoint.
//!
//! # Time series
//!
//! `series.csv` starts with the exact header
//!
//! ```text
//! t,total_energy,bulk_energy,gradient_energy,dissipation,mean_drift_max,constraint_violation,potential_sum_violation,separation_floor,step_energy_delta
//! ```
//!
//! followed by one row per emission cadence, decimal ASCII with 17
//! significant digits, appended and flushed as the run progresses.
//!
//! # Checkpoint (`MCAC1`)
//!
//! Little-endian throughout:
//!
//! ```text
//! bytes 0..5   magic "MCAC1"
//! u32          dim (1 or 2)
//! u32 * dim    cells per axis
//! u32          n_phases
//! f64          t
//! u64          step_count
//! f64          gamma
//! f64          theta
//! f64          epsilon
//! f64          xi
//! f64 * n_phases * cells   field values, component-major
//! ```

use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Read, Write};
use std::path::Path;

use thiserror::Error;

use crate::discretization::{FieldError, Grid, PhaseField};

pub const SERIES_HEADER: &str = "t,total_energy,bulk_energy,gradient_energy,dissipation,mean_drift_max,constraint_violation,potential_sum_violation,separation_floor,step_energy_delta";

const MAGIC: &[u8; 5] = b"MCAC1";

#[derive(Debug, Error)]
pub enum IoError {
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error("not a checkpoint: bad magic")]
    BadMagic,
    #[error("corrupt file: {0}")]
    Corrupt(String),
    #[error(transparent)]
    Field(#[from] FieldError),
}

/// One row of `series.csv`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TimeSeriesRow {
    pub t: f64,
    pub total_energy: f64,
    pub bulk_energy: f64,
    pub gradient_energy: f64,
    pub dissipation: f64,
    pub mean_drift_max: f64,
    pub constraint_violation: f64,
    pub potential_sum_violation: f64,
    pub separation_floor: f64,
    pub step_energy_delta: f64,
}

impl TimeSeriesRow {
    fn fields(&self) -> [f64; 10] {
        [
            self.t,
            self.total_energy,
            self.bulk_energy,
            self.gradient_energy,
            self.dissipation,
            self.mean_drift_max,
            self.constraint_violation,
            self.potential_sum_violation,
            self.separation_floor,
            self.step_energy_delta,
        ]
    }

    /// 17 significant digits per column.
    pub fn to_csv_line(&self) -> String {
        self.fields()
            .iter()
            .map(|v| format!("{v:.16e}"))
            .collect::<Vec<_>>()
            .join(",")
    }

    pub fn parse_csv_line(line: &str) -> Result<Self, IoError> {
        let vals: Vec<f64> = line
            .split(',')
            .map(|tok| {
                tok.trim()
                    .parse::<f64>()
                    .ok()
                    .filter(|v| v.is_finite())
                    .ok_or_else(|| IoError::Corrupt(format!("bad number '{tok}'")))
            })
            .collect::<Result<_, _>>()?;
        if vals.len() != 10 {
            return Err(IoError::Corrupt(format!(
                "expected 10 columns, got {}",
                vals.len()
            )));
        }
        Ok(Self {
            t: vals[0],
            total_energy: vals[1],
            bulk_energy: vals[2],
            gradient_energy: vals[3],
            dissipation: vals[4],
            mean_drift_max: vals[5],
            constraint_violation: vals[6],
            potential_sum_violation: vals[7],
            separation_floor: vals[8],
            step_energy_delta: vals[9],
        })
    }
}

/// Append-only series writer; every row is flushed so partial runs leave
/// loadable files.
pub struct SeriesWriter {
    out: BufWriter<File>,
}

impl SeriesWriter {
    pub fn create(path: &Path) -> Result<Self, IoError> {
        let mut out = BufWriter::new(File::create(path)?);
        writeln!(out, "{SERIES_HEADER}")?;
        out.flush()?;
        Ok(Self { out })
    }

    pub fn append(&mut self, row: &TimeSeriesRow) -> Result<(), IoError> {
        writeln!(self.out, "{}", row.to_csv_line())?;
        self.out.flush()?;
        Ok(())
    }
}

pub fn read_series(path: &Path) -> Result<Vec<TimeSeriesRow>, IoError> {
    let reader = BufReader::new(File::open(path)?);
    let mut rows = Vec::new();
    for (i, line) in reader.lines().enumerate() {
        let line = line?;
        if i == 0 {
            if line != SERIES_HEADER {
                return Err(IoError::Corrupt("unexpected series header".into()));
            }
            continue;
        }
        if line.trim().is_empty() {
            continue;
        }
        rows.push(TimeSeriesRow::parse_csv_line(&line)?);
    }
    Ok(rows)
}

/// In-memory image of one checkpoint.
#[derive(Clone, Debug, PartialEq)]
pub struct Checkpoint {
    pub shape: Vec<u32>,
    pub n_phases: u32,
    pub t: f64,
    pub step_count: u64,
    pub gamma: f64,
    pub theta: f64,
    pub epsilon: f64,
    pub xi: f64,
    /// Component-major field values.
    pub data: Vec<f64>,
}

impl Checkpoint {
    /// Bundles a field with its model parameters.
    pub fn from_field(
        u: &PhaseField,
        t: f64,
        step_count: u64,
        gamma: f64,
        theta: f64,
        epsilon: f64,
        xi: f64,
    ) -> Self {
        Self {
            shape: u.grid().shape().iter().map(|&n| n as u32).collect(),
            n_phases: u.n_phases() as u32,
            t,
            step_count,
            gamma,
            theta,
            epsilon,
            xi,
            data: u.data().to_vec(),
        }
    }

    /// Rebuilds the field on a grid with the stored shape and the given
    /// physical extent per axis.
    pub fn to_field(&self, extent: &[f64]) -> Result<PhaseField, IoError> {
        let shape: Vec<usize> = self.shape.iter().map(|&n| n as usize).collect();
        let grid = Grid::new(&shape, extent)?;
        Ok(PhaseField::from_data(
            &grid,
            self.n_phases as usize,
            self.data.clone(),
        )?)
    }
}

pub fn write_checkpoint(path: &Path, cp: &Checkpoint) -> Result<(), IoError> {
    let mut out = BufWriter::new(File::create(path)?);
    out.write_all(MAGIC)?;
    out.write_all(&(cp.shape.len() as u32).to_le_bytes())?;
    for &n in &cp.shape {
        out.write_all(&n.to_le_bytes())?;
    }
    out.write_all(&cp.n_phases.to_le_bytes())?;
    out.write_all(&cp.t.to_le_bytes())?;
    out.write_all(&cp.step_count.to_le_bytes())?;
    out.write_all(&cp.gamma.to_le_bytes())?;
    out.write_all(&cp.theta.to_le_bytes())?;
    out.write_all(&cp.epsilon.to_le_bytes())?;
    out.write_all(&cp.xi.to_le_bytes())?;
    for v in &cp.data {
        out.write_all(&v.to_le_bytes())?;
    }
    out.flush()?;
    Ok(())
}

pub fn read_checkpoint(path: &Path) -> Result<Checkpoint, IoError> {
    let mut input = BufReader::new(File::open(path)?);
    let mut magic = [0u8; 5];
    input.read_exact(&mut magic)?;
    if &magic != MAGIC {
        return Err(IoError::BadMagic);
    }
    let dim = read_u32(&mut input)?;
    if !(1..=2).contains(&dim) {
        return Err(IoError::Corrupt(format!("dimension {dim}")));
    }
    let mut shape = Vec::with_capacity(dim as usize);
    for _ in 0..dim {
        shape.push(read_u32(&mut input)?);
    }
    let n_phases = read_u32(&mut input)?;
    if !(2..=1024).contains(&n_phases) {
        return Err(IoError::Corrupt(format!("phase count {n_phases}")));
    }
    let t = read_f64(&mut input)?;
    let step_count = read_u64(&mut input)?;
    let gamma = read_f64(&mut input)?;
    let theta = read_f64(&mut input)?;
    let epsilon = read_f64(&mut input)?;
    let xi = read_f64(&mut input)?;
    let cells: u64 = shape.iter().map(|&n| n as u64).product();
    let len = cells
        .checked_mul(n_phases as u64)
        .ok_or_else(|| IoError::Corrupt("field size overflows".into()))?;
    let mut data = Vec::with_capacity(len as usize);
    for _ in 0..len {
        data.push(read_f64(&mut input)?);
    }
    // trailing bytes mean the header lied about the size
    let mut probe = [0u8; 1];
    if input.read(&mut probe)? != 0 {
        return Err(IoError::Corrupt("trailing bytes after field data".into()));
    }
    Ok(Checkpoint {
        shape,
        n_phases,
        t,
        step_count,
        gamma,
        theta,
        epsilon,
        xi,
        data,
    })
}

fn read_u32(r: &mut impl Read) -> Result<u32, IoError> {
    let mut b = [0u8; 4];
    r.read_exact(&mut b)?;
    Ok(u32::from_le_bytes(b))
}

fn read_u64(r: &mut impl Read) -> Result<u64, IoError> {
    let mut b = [0u8; 8];
    r.read_exact(&mut b)?;
    Ok(u64::from_le_bytes(b))
}

fn read_f64(r: &mut impl Read) -> Result<f64, IoError> {
    let mut b = [0u8; 8];
    r.read_exact(&mut b)?;
    Ok(f64::from_le_bytes(b))
}
