//! Parameter sweeps over `(D, Jz, T)` grids and their CSV form.
//!
//! Grid points are independent, so the engine may evaluate them in parallel;
//! rows always come back in grid order (model, then D, then Jz, then T).

use std::fmt;
use std::io::{Read, Write};
use std::path::PathBuf;
use std::str::FromStr;

use rayon::prelude::*;

use crate::entanglement::{concurrence_closed, concurrence_oracle, Method};
use crate::error::{Error, Result};
use crate::model::{CouplingParams, DmAxis, MAX_COUPLING};
use crate::thermal::{gibbs_oracle, partition, Temperature};

pub const CSV_HEADER: [&str; 8] = ["model", "J", "Jz", "D", "T", "Z", "concurrence", "method"];

/// Significant digits of every number written to CSV.
pub const CSV_DIGITS: usize = 12;

/// One swept (or fixed) coordinate.
#[derive(Clone, Debug, PartialEq)]
pub enum Axis {
    Fixed(f64),
    /// `steps` evenly spaced points with both endpoints included.
    Range {
        min: f64,
        max: f64,
        steps: usize,
    },
    List(Vec<f64>),
}

impl Axis {
    pub fn range(min: f64, max: f64, steps: usize) -> Self {
        Axis::Range { min, max, steps }
    }

    pub fn values(&self) -> Vec<f64> {
        match self {
            Axis::Fixed(v) => vec![*v],
            Axis::Range { min, max, steps } => {
                let n = *steps;
                (0..n)
                    .map(|i| {
                        if i + 1 == n {
                            *max
                        } else {
                            min + (max - min) * i as f64 / (n - 1) as f64
                        }
                    })
                    .collect()
            }
            Axis::List(v) => v.clone(),
        }
    }

    pub fn len(&self) -> usize {
        match self {
            Axis::Fixed(_) => 1,
            Axis::Range { steps, .. } => *steps,
            Axis::List(v) => v.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    fn validate(&self, name: &str) -> Result<()> {
        let bad = |why: String| Err(Error::InvalidSpec(format!("{name} axis: {why}")));
        match self {
            Axis::Range { min, max, steps } => {
                if !(min.is_finite() && max.is_finite()) {
                    return bad("non-finite bound".into());
                }
                if min >= max {
                    return bad(format!("min {min} must be below max {max}"));
                }
                if *steps < 2 {
                    return bad(format!("needs at least 2 steps, got {steps}"));
                }
            }
            Axis::List(v) if v.is_empty() => return bad("empty list".into()),
            _ => {}
        }
        if let Some(v) = self.values().into_iter().find(|v| !v.is_finite()) {
            return bad(format!("non-finite value {v}"));
        }
        Ok(())
    }
}

/// How concurrence is evaluated at each grid point.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum EvalMethod {
    /// Closed form, falling back to the oracle where the closed form does not apply.
    #[default]
    Closed,
    Oracle,
}

#[derive(Clone, Debug, PartialEq)]
pub struct SweepSpec {
    /// One curve family per model; fig6 uses both.
    pub models: Vec<DmAxis>,
    pub j: f64,
    pub jz: Axis,
    pub d: Axis,
    pub t: Axis,
    pub method: EvalMethod,
    pub output_path: Option<PathBuf>,
}

impl SweepSpec {
    pub fn validate(&self) -> Result<()> {
        if self.models.is_empty() {
            return Err(Error::InvalidSpec("no model selected".into()));
        }
        if !self.j.is_finite() || self.j.abs() > MAX_COUPLING {
            return Err(Error::InvalidSpec(format!("J = {} out of range", self.j)));
        }
        self.jz.validate("Jz")?;
        self.d.validate("D")?;
        self.t.validate("T")?;
        for (name, axis) in [("Jz", &self.jz), ("D", &self.d)] {
            if axis.values().iter().any(|v| v.abs() > MAX_COUPLING) {
                return Err(Error::InvalidSpec(format!(
                    "{name} exceeds |{MAX_COUPLING}|"
                )));
            }
        }
        if self.t.values().iter().any(|&t| t <= 0.0) {
            return Err(Error::InvalidSpec("temperatures must be positive".into()));
        }
        Ok(())
    }

    pub fn len(&self) -> usize {
        self.models.len() * self.d.len() * self.jz.len() * self.t.len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Grid points in output order.
    fn points(&self) -> Vec<(DmAxis, f64, f64, f64)> {
        let (ds, jzs, ts) = (self.d.values(), self.jz.values(), self.t.values());
        let mut out = Vec::with_capacity(self.len());
        for &m in &self.models {
            for &d in &ds {
                for &jz in &jzs {
                    for &t in &ts {
                        out.push((m, d, jz, t));
                    }
                }
            }
        }
        out
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SweepRecord {
    pub model: DmAxis,
    pub j: f64,
    pub jz: f64,
    pub d: f64,
    pub t: f64,
    pub partition: f64,
    pub concurrence: f64,
    pub method: Method,
}

/// Evaluates one grid point.
pub fn evaluate_point(
    params: &CouplingParams<f64>,
    t: f64,
    method: EvalMethod,
) -> Result<SweepRecord> {
    let temp = Temperature::new(t)?;
    let (concurrence, partition_value) = match method {
        EvalMethod::Closed => match concurrence_closed(params, temp) {
            Ok(c) => (c, partition(params, temp)?),
            Err(Error::JzExceedsJ { .. }) => oracle_point(params, temp)?,
            Err(e) => return Err(e),
        },
        EvalMethod::Oracle => oracle_point(params, temp)?,
    };
    Ok(SweepRecord {
        model: params.axis,
        j: params.j,
        jz: params.jz,
        d: params.d,
        t,
        partition: partition_value,
        concurrence: concurrence.c,
        method: concurrence.method,
    })
}

fn oracle_point(
    params: &CouplingParams<f64>,
    temp: Temperature<f64>,
) -> Result<(crate::entanglement::ConcurrenceValue<f64>, f64)> {
    let state = gibbs_oracle(params, temp)?;
    Ok((concurrence_oracle(&state.rho)?, state.partition()))
}

/// Evaluates every grid point, in parallel.
pub fn sweep_grid(spec: &SweepSpec) -> Result<Vec<SweepRecord>> {
    sweep_grid_with(spec, true)
}

pub fn sweep_grid_with(spec: &SweepSpec, parallel: bool) -> Result<Vec<SweepRecord>> {
    spec.validate()?;
    let eval = |&(m, d, jz, t): &(DmAxis, f64, f64, f64)| {
        let p = CouplingParams::new(spec.j, jz, d, m)?;
        evaluate_point(&p, t, spec.method)
    };
    let points = spec.points();
    if parallel {
        points.par_iter().map(eval).collect()
    } else {
        points.iter().map(eval).collect()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum FigureId {
    Fig1,
    Fig2,
    Fig3,
    Fig4,
    Fig5,
    Fig6,
}

impl FigureId {
    pub const ALL: [FigureId; 6] = [
        FigureId::Fig1,
        FigureId::Fig2,
        FigureId::Fig3,
        FigureId::Fig4,
        FigureId::Fig5,
        FigureId::Fig6,
    ];
}

impl FromStr for FigureId {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "fig1" => Ok(FigureId::Fig1),
            "fig2" => Ok(FigureId::Fig2),
            "fig3" => Ok(FigureId::Fig3),
            "fig4" => Ok(FigureId::Fig4),
            "fig5" => Ok(FigureId::Fig5),
            "fig6" => Ok(FigureId::Fig6),
            _ => Err(Error::UnknownPreset(s.to_string())),
        }
    }
}

impl fmt::Display for FigureId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let n = FigureId::ALL.iter().position(|x| x == self).unwrap() + 1;
        write!(f, "fig{n}")
    }
}

/// Temperature axis shared by every preset: 0.05..10 in 200 points (step 0.05).
pub fn preset_t_axis() -> Axis {
    Axis::range(0.05, 10.0, 200)
}

/// DM-strength axis for the surface presets.
pub fn preset_d_axis() -> Axis {
    Axis::range(0.0, 3.0, 150)
}

pub const PRESET_D_CURVES: [f64; 4] = [0.0, 0.5, 1.0, 2.0];
pub const PRESET_JZ_CURVES: [f64; 4] = [0.0, 0.2, 0.5, 1.0];

pub fn figure_preset(id: FigureId) -> SweepSpec {
    let base = |models: Vec<DmAxis>, jz: Axis, d: Axis| SweepSpec {
        models,
        j: 1.0,
        jz,
        d,
        t: preset_t_axis(),
        method: EvalMethod::Closed,
        output_path: None,
    };
    match id {
        FigureId::Fig1 => base(vec![DmAxis::Z], Axis::Fixed(0.2), preset_d_axis()),
        FigureId::Fig2 => base(
            vec![DmAxis::Z],
            Axis::Fixed(0.2),
            Axis::List(PRESET_D_CURVES.to_vec()),
        ),
        FigureId::Fig3 => base(
            vec![DmAxis::Z],
            Axis::List(PRESET_JZ_CURVES.to_vec()),
            Axis::Fixed(1.0),
        ),
        FigureId::Fig4 => base(vec![DmAxis::X], Axis::Fixed(0.2), preset_d_axis()),
        FigureId::Fig5 => base(
            vec![DmAxis::X],
            Axis::List(PRESET_JZ_CURVES.to_vec()),
            Axis::Fixed(1.0),
        ),
        FigureId::Fig6 => base(
            vec![DmAxis::Z, DmAxis::X],
            Axis::Fixed(0.2),
            Axis::Fixed(2.0),
        ),
    }
}

/// `%g`-style formatting with `digits` significant digits and trailing zeros removed.
pub fn format_sig(x: f64, digits: usize) -> String {
    if x == 0.0 {
        return "0".into();
    }
    if !x.is_finite() {
        return x.to_string();
    }
    let sci = format!("{:.*e}", digits.saturating_sub(1), x);
    let (mantissa, exp) = sci.split_once('e').expect("exponent present");
    let exp: i32 = exp.parse().expect("integer exponent");
    if exp < -5 || exp >= digits as i32 {
        format!("{}e{}", trim_zeros(mantissa), exp)
    } else {
        let decimals = (digits as i32 - 1 - exp).max(0) as usize;
        trim_zeros(&format!("{:.*}", decimals, x)).to_string()
    }
}

fn trim_zeros(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

fn csv_err(e: csv::Error) -> Error {
    match e.into_kind() {
        csv::ErrorKind::Io(io) => Error::from(io),
        other => Error::Format(format!("{other:?}")),
    }
}

/// Writes the header and one line per record (LF endings).
pub fn write_csv<W: Write>(records: &[SweepRecord], out: W) -> Result<()> {
    let mut w = csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(out);
    w.write_record(CSV_HEADER).map_err(csv_err)?;
    for r in records {
        let num = |x: f64| format_sig(x, CSV_DIGITS);
        w.write_record([
            r.model.as_str().to_string(),
            num(r.j),
            num(r.jz),
            num(r.d),
            num(r.t),
            num(r.partition),
            num(r.concurrence),
            r.method.as_str().to_string(),
        ])
        .map_err(csv_err)?;
    }
    w.flush()?;
    Ok(())
}

pub fn to_csv_string(records: &[SweepRecord]) -> Result<String> {
    let mut buf = Vec::new();
    write_csv(records, &mut buf)?;
    Ok(String::from_utf8(buf).expect("CSV output is ASCII"))
}

pub fn read_csv<R: Read>(input: R) -> Result<Vec<SweepRecord>> {
    let mut rdr = csv::ReaderBuilder::new()
        .has_headers(true)
        .from_reader(input);
    let header = rdr.headers().map_err(csv_err)?;
    if header.iter().ne(CSV_HEADER.iter().copied()) {
        return Err(Error::Format(format!("unexpected header {header:?}")));
    }
    rdr.records()
        .map(|row| {
            let row = row.map_err(csv_err)?;
            let num = |i: usize| -> Result<f64> {
                row[i].parse().map_err(|_| {
                    Error::Format(format!(
                        "bad number '{}' in column {}",
                        &row[i], CSV_HEADER[i]
                    ))
                })
            };
            Ok(SweepRecord {
                model: row[0].parse()?,
                j: num(1)?,
                jz: num(2)?,
                d: num(3)?,
                t: num(4)?,
                partition: num(5)?,
                concurrence: num(6)?,
                method: row[7].parse()?,
            })
        })
        .collect()
}
