use std::io::Write;

use rayon::prelude::*;
use serde::Serialize;

use crate::analytic::{linspace, p_success, Concurrence, MAX_CLOSED_FORM_DEPTH};
use crate::error::{Error, Result};
use crate::maf::{maf_row, MafRow};
use crate::protocol::{plan, ProtocolConfig, Termination, DEFAULT_ATTEMPT_CEILING};
use crate::state::GhzResource;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Json,
}

impl std::str::FromStr for Format {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "csv" => Ok(Self::Csv),
            "json" => Ok(Self::Json),
            other => Err(Error::InvalidSpec(format!("unknown format `{other}`"))),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SweepSpec {
    pub c_min: f64,
    pub c_max: f64,
    pub points: usize,
    pub depths: Vec<usize>,
    pub strategies: Vec<Termination>,
    pub output_path: Option<String>,
    pub format: Format,
}

impl Default for SweepSpec {
    fn default() -> Self {
        Self {
            c_min: 0.0,
            c_max: 1.0,
            points: 101,
            depths: vec![0, 1, 2, 3],
            strategies: vec![Termination::Continue],
            output_path: None,
            format: Format::Csv,
        }
    }
}

impl SweepSpec {
    pub fn validate(&self) -> Result<()> {
        let bad = |msg: &str| Err(Error::InvalidSpec(msg.to_string()));
        if !(0.0 <= self.c_min && self.c_min < self.c_max && self.c_max <= 1.0) {
            return bad("need 0 <= c_min < c_max <= 1");
        }
        if self.points < 2 {
            return bad("need points >= 2");
        }
        if self.depths.is_empty() || self.strategies.is_empty() {
            return bad("need at least one depth and one strategy");
        }
        if let Some(&d) = self.depths.iter().find(|&&d| d > DEFAULT_ATTEMPT_CEILING) {
            return Err(Error::InvalidSpec(format!(
                "depth {d} exceeds the ceiling {DEFAULT_ATTEMPT_CEILING}"
            )));
        }
        Ok(())
    }

    pub fn grid(&self) -> Vec<f64> {
        linspace(self.c_min, self.c_max, self.points)
    }

    /// `(c, depth, strategy)` in output order.
    fn tuples(&self) -> Vec<(f64, usize, Termination)> {
        let mut depths = self.depths.clone();
        depths.sort_unstable();
        depths.dedup();
        let mut out = Vec::new();
        for c in self.grid() {
            for &d in &depths {
                for &s in &self.strategies {
                    out.push((c, d, s));
                }
            }
        }
        out
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SweepRow {
    pub c: f64,
    pub chi: f64,
    pub depth: usize,
    pub strategy: Termination,
    /// Closed form, for depths up to three without a final generalized VNM.
    pub p_analytic: Option<f64>,
    pub p_enum: f64,
    pub maf: f64,
    pub delta: Option<f64>,
}

pub fn sweep_row(c: f64, depth: usize, strategy: Termination) -> Result<SweepRow> {
    let resource = GhzResource::from_concurrence(c)?;
    let p = plan(&resource, &ProtocolConfig::new(depth, strategy))?;
    let p_enum = p.success_probability();
    let p_analytic = if depth <= MAX_CLOSED_FORM_DEPTH && strategy != Termination::MatchedVnm {
        Some(p_success(depth, Concurrence::new(c)?)?)
    } else {
        None
    };
    Ok(SweepRow {
        c,
        chi: resource.chi(),
        depth,
        strategy,
        p_analytic,
        p_enum,
        maf: p.mean_average_fidelity(),
        delta: p_analytic.map(|a| (a - p_enum).abs()),
    })
}

/// Rows ordered by `c`, then depth, then strategy, whatever the thread count.
pub fn cmd_sweep(spec: &SweepSpec) -> Result<Vec<SweepRow>> {
    spec.validate()?;
    spec.tuples()
        .into_par_iter()
        .map(|(c, d, s)| sweep_row(c, d, s))
        .collect()
}

pub fn cmd_maf(spec: &SweepSpec) -> Result<Vec<MafRow>> {
    spec.validate()?;
    spec.tuples()
        .into_par_iter()
        .map(|(c, d, s)| maf_row(c, d, s))
        .collect()
}

/// Seventeen significant digits.
pub fn num(x: f64) -> String {
    format!("{x:.16e}")
}

fn opt(x: Option<f64>) -> String {
    x.map(num).unwrap_or_default()
}

fn csv_out<W: Write>(
    out: W,
    header: &[&str],
    rows: impl Iterator<Item = Vec<String>>,
) -> Result<()> {
    let mut w = csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(out);
    w.write_record(header).map_err(csv_err)?;
    for r in rows {
        w.write_record(&r).map_err(csv_err)?;
    }
    w.flush()?;
    Ok(())
}

fn csv_err(e: csv::Error) -> Error {
    Error::Io(std::io::Error::other(e))
}

pub fn write_sweep<W: Write>(rows: &[SweepRow], format: Format, mut out: W) -> Result<()> {
    match format {
        Format::Json => {
            serde_json::to_writer_pretty(&mut out, rows)?;
            writeln!(out)?;
            Ok(())
        }
        Format::Csv => csv_out(
            out,
            &[
                "c",
                "chi",
                "depth",
                "strategy",
                "p_analytic",
                "p_enum",
                "maf",
                "delta",
            ],
            rows.iter().map(|r| {
                vec![
                    num(r.c),
                    num(r.chi),
                    r.depth.to_string(),
                    r.strategy.to_string(),
                    opt(r.p_analytic),
                    num(r.p_enum),
                    num(r.maf),
                    opt(r.delta),
                ]
            }),
        ),
    }
}

pub fn write_maf<W: Write>(rows: &[MafRow], format: Format, mut out: W) -> Result<()> {
    match format {
        Format::Json => {
            serde_json::to_writer_pretty(&mut out, rows)?;
            writeln!(out)?;
            Ok(())
        }
        Format::Csv => csv_out(
            out,
            &[
                "c",
                "chi",
                "depth",
                "strategy",
                "maf",
                "maf_closed_form",
                "success_prob",
            ],
            rows.iter().map(|r| {
                vec![
                    num(r.c),
                    num(r.chi),
                    r.depth.to_string(),
                    r.strategy.to_string(),
                    num(r.maf),
                    num(r.maf_closed_form),
                    num(r.success_prob),
                ]
            }),
        ),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small() -> SweepSpec {
        SweepSpec {
            points: 5,
            depths: vec![1, 0],
            strategies: vec![Termination::Continue, Termination::MatchedVnm],
            ..SweepSpec::default()
        }
    }

    #[test]
    fn rows_are_ordered_and_agree() {
        let rows = cmd_sweep(&small()).unwrap();
        assert_eq!(rows.len(), 20);
        assert_eq!(
            (rows[0].depth, rows[0].strategy),
            (0, Termination::Continue)
        );
        assert_eq!(
            (rows[1].depth, rows[1].strategy),
            (0, Termination::MatchedVnm)
        );
        assert_eq!(rows[2].depth, 1);
        for r in &rows {
            if let Some(d) = r.delta {
                assert!(d < 1e-12);
            }
        }
        assert!(rows[1].p_analytic.is_none());
    }

    #[test]
    fn csv_is_stable() {
        let rows = cmd_sweep(&small()).unwrap();
        let mut a = Vec::new();
        let mut b = Vec::new();
        write_sweep(&rows, Format::Csv, &mut a).unwrap();
        write_sweep(&cmd_sweep(&small()).unwrap(), Format::Csv, &mut b).unwrap();
        assert_eq!(a, b);
        let text = String::from_utf8(a).unwrap();
        assert!(text.starts_with("c,chi,depth,strategy,p_analytic,p_enum,maf,delta\n"));
        assert!(!text.contains('\r'));
        assert_eq!(text.lines().count(), 21);
    }

    #[test]
    fn bad_specs() {
        for spec in [
            SweepSpec {
                c_min: 0.5,
                c_max: 0.5,
                ..SweepSpec::default()
            },
            SweepSpec {
                points: 1,
                ..SweepSpec::default()
            },
            SweepSpec {
                depths: vec![13],
                ..SweepSpec::default()
            },
            SweepSpec {
                c_max: 1.2,
                ..SweepSpec::default()
            },
        ] {
            assert!(matches!(spec.validate(), Err(Error::InvalidSpec(_))));
        }
    }
}
