//! Serializable command outputs and their text/CSV renderings.

use std::fmt::Write as _;

use isoflag::repdim::{ClassificationReport, EnumerationReport};
use isoflag::{BoundReport, FlagSignature, HighestWeight};
use serde::{Deserialize, Serialize};

use crate::io::real;

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Envelope<T> {
    pub schema_version: u32,
    pub command: String,
    pub report: T,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EmbedReport {
    pub signature: FlagSignature,
    pub spectrum: Vec<f64>,
    pub matrix: Vec<Vec<f64>>,
    pub eigenvalues: Vec<f64>,
    pub trace: f64,
    pub q: Vec<Vec<f64>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RecoverReport {
    pub signature: FlagSignature,
    pub spectrum: Vec<f64>,
    pub q: Vec<Vec<f64>>,
    /// Orthonormal basis of the `i`-th eigenspace, as columns.
    pub block_bases: Vec<Vec<Vec<f64>>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProjectReport {
    pub signature: FlagSignature,
    pub spectrum: Vec<f64>,
    pub point: Vec<Vec<f64>>,
    pub q: Vec<Vec<f64>>,
    pub distance: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OptimizeReport {
    pub signature: FlagSignature,
    pub spectrum: Vec<f64>,
    pub point: Vec<Vec<f64>>,
    pub iterations: usize,
    pub converged: bool,
    pub final_grad_norm: f64,
    pub grad_norms: Vec<f64>,
    /// Frobenius distance from the final point to the nearest point of the target.
    pub distance_to_nearest: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DimReport {
    pub n: usize,
    pub weight: HighestWeight,
    pub dim: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepReport {
    pub max_n: usize,
    pub rows: Vec<BoundReport>,
    pub all_gunther_hold: bool,
}

pub trait Render {
    fn text(&self) -> String;
    fn csv(&self) -> String;
}

fn list(values: &[f64]) -> String {
    values.iter().map(|&v| real(v)).collect::<Vec<_>>().join(",")
}

fn matrix_lines(out: &mut String, m: &[Vec<f64>]) {
    for row in m {
        let _ = writeln!(out, "  {}", row.iter().map(|&v| real(v)).collect::<Vec<_>>().join(" "));
    }
}

fn matrix_csv(m: &[Vec<f64>]) -> String {
    m.iter().map(|row| list(row) + "\n").collect()
}

fn ks(sig: &FlagSignature) -> String {
    sig.ks().iter().map(usize::to_string).collect::<Vec<_>>().join(",")
}

fn header(out: &mut String, sig: &FlagSignature, spectrum: &[f64]) {
    let _ = writeln!(out, "n: {}", sig.n());
    let _ = writeln!(out, "ks: {}", ks(sig));
    let _ = writeln!(out, "spectrum: {}", list(spectrum));
}

impl Render for EmbedReport {
    fn text(&self) -> String {
        let mut out = String::new();
        header(&mut out, &self.signature, &self.spectrum);
        let _ = writeln!(out, "trace: {}", real(self.trace));
        let _ = writeln!(out, "eigenvalues: {}", list(&self.eigenvalues));
        out.push_str("matrix:\n");
        matrix_lines(&mut out, &self.matrix);
        out
    }

    fn csv(&self) -> String {
        matrix_csv(&self.matrix)
    }
}

impl Render for RecoverReport {
    fn text(&self) -> String {
        let mut out = String::new();
        header(&mut out, &self.signature, &self.spectrum);
        out.push_str("q:\n");
        matrix_lines(&mut out, &self.q);
        for (i, b) in self.block_bases.iter().enumerate() {
            let _ = writeln!(out, "block {}:", i + 1);
            matrix_lines(&mut out, b);
        }
        out
    }

    fn csv(&self) -> String {
        matrix_csv(&self.q)
    }
}

impl Render for ProjectReport {
    fn text(&self) -> String {
        let mut out = String::new();
        header(&mut out, &self.signature, &self.spectrum);
        let _ = writeln!(out, "distance: {}", real(self.distance));
        out.push_str("point:\n");
        matrix_lines(&mut out, &self.point);
        out
    }

    fn csv(&self) -> String {
        matrix_csv(&self.point)
    }
}

impl Render for OptimizeReport {
    fn text(&self) -> String {
        let mut out = String::new();
        header(&mut out, &self.signature, &self.spectrum);
        let _ = writeln!(out, "iterations: {}", self.iterations);
        let _ = writeln!(out, "converged: {}", self.converged);
        let _ = writeln!(out, "final_grad_norm: {}", real(self.final_grad_norm));
        let _ = writeln!(out, "distance_to_nearest: {}", real(self.distance_to_nearest));
        out.push_str("point:\n");
        matrix_lines(&mut out, &self.point);
        let _ = writeln!(out, "grad_norms: {}", list(&self.grad_norms));
        out
    }

    fn csv(&self) -> String {
        let mut out = String::from("iteration,grad_norm\n");
        for (i, g) in self.grad_norms.iter().enumerate() {
            let _ = writeln!(out, "{i},{}", real(*g));
        }
        out
    }
}

impl Render for DimReport {
    fn text(&self) -> String {
        format!("{}\n", self.dim)
    }

    fn csv(&self) -> String {
        format!("n,weight,dim\n{},\"{}\",{}\n", self.n, self.weight, self.dim)
    }
}

fn conjugate(c: &Option<HighestWeight>) -> String {
    c.as_ref().map(ToString::to_string).unwrap_or_default()
}

impl Render for EnumerationReport {
    fn text(&self) -> String {
        let mut out = String::new();
        for h in &self.hits {
            let _ = write!(out, "{}\t({})", h.dim, h.weight);
            if let Some(c) = &h.conjugate {
                let _ = write!(out, " ~ ({c})");
            }
            if !h.real_form {
                out.push_str("\tcomplex");
            }
            out.push('\n');
        }
        out
    }

    fn csv(&self) -> String {
        let mut out = String::from("dim,weight,conjugate,real_form\n");
        for h in &self.hits {
            let _ = writeln!(out, "{},\"{}\",\"{}\",{}", h.dim, h.weight, conjugate(&h.conjugate), h.real_form);
        }
        out
    }
}

impl Render for ClassificationReport {
    fn text(&self) -> String {
        let mut out = format!("n: {}\nbound: {}\n", self.n, self.bound);
        for c in &self.checks {
            let _ = writeln!(out, "{} {}: {}", if c.passed { "ok  " } else { "FAIL" }, c.name, c.detail);
        }
        let _ = writeln!(out, "passed: {}", self.passed);
        out
    }

    fn csv(&self) -> String {
        let mut out = String::from("check,passed,detail\n");
        for c in &self.checks {
            let _ = writeln!(out, "{},{},\"{}\"", c.name, c.passed, c.detail.replace('"', "\"\""));
        }
        out
    }
}

const BOUND_COLUMNS: &str = "n,ks,flag_dim,isospectral,gunther,whitney,wang,isospectral_lt_gunther,whitney_comparison";

fn bound_row(r: &BoundReport) -> String {
    format!(
        "{},\"{}\",{},{},{},{},{},{},{}",
        r.signature.n(),
        ks(&r.signature),
        r.flag_dim,
        r.isospectral,
        r.gunther,
        r.whitney,
        r.wang.map(|w| w.to_string()).unwrap_or_default(),
        r.comparison("isospectral < gunther").unwrap_or(false),
        r.comparison("whitney_comparison").unwrap_or(false),
    )
}

impl Render for BoundReport {
    fn text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "n: {}", self.signature.n());
        let _ = writeln!(out, "ks: {}", ks(&self.signature));
        let _ = writeln!(out, "flag_dim: {}", self.flag_dim);
        let _ = writeln!(out, "isospectral: {} ({:?})", self.isospectral, self.isospectral_status);
        let _ = writeln!(out, "gunther: {}", self.gunther);
        let _ = writeln!(out, "whitney: {}", self.whitney);
        if let (Some(w), Some(g)) = (self.wang, self.group_order) {
            let _ = writeln!(out, "wang (|G| = {g}): {w}");
        }
        for c in &self.comparisons {
            let _ = writeln!(out, "{}: {}", c.name, c.holds);
        }
        out
    }

    fn csv(&self) -> String {
        format!("{BOUND_COLUMNS}\n{}\n", bound_row(self))
    }
}

impl Render for SweepReport {
    fn text(&self) -> String {
        let failures = self
            .rows
            .iter()
            .filter(|r| r.comparison("isospectral < gunther") != Some(true))
            .count();
        format!(
            "max_n: {}\nsignatures: {}\ngunther failures: {failures}\nall_gunther_hold: {}\n",
            self.max_n,
            self.rows.len(),
            self.all_gunther_hold
        )
    }

    fn csv(&self) -> String {
        let mut out = format!("{BOUND_COLUMNS}\n");
        for r in &self.rows {
            out.push_str(&bound_row(r));
            out.push('\n');
        }
        out
    }
}
