//! Result export: CSV for arrays, JSON for reports.
//!
//! CSV files carry a header row, UTF-8 text, `\n` line endings, and values in
//! shortest round-trip decimal form, so identical inputs produce byte-identical
//! files.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use serde::Serialize;

use crate::classical::Trajectory;
use crate::dilaton::FieldSample;
use crate::error::Result;
use crate::string::DensityPoint;

/// Field grid CSV: `x,y,phi,b_inv,b,mass`.
pub fn field_grid_csv(rows: &[FieldSample]) -> String {
    let mut out = String::from("x,y,phi,b_inv,b,mass\n");
    for r in rows {
        let _ = writeln!(out, "{},{},{},{},{},{}", r.x, r.y, r.phi, r.b_inv, r.b, r.mass);
    }
    out
}

/// Eigenfunction CSV: `r,psi0,psi1,...`.
pub fn eigenfunctions_csv(nodes: &[f64], eigenvectors: &[Vec<f64>]) -> String {
    let mut out = String::from("r");
    for k in 0..eigenvectors.len() {
        let _ = write!(out, ",psi{k}");
    }
    out.push('\n');
    for (j, r) in nodes.iter().enumerate() {
        let _ = write!(out, "{r}");
        for psi in eigenvectors {
            let _ = write!(out, ",{}", psi[j]);
        }
        out.push('\n');
    }
    out
}

/// Trajectory CSV: `t,x0..,p0..,E`.
pub fn trajectory_csv(tr: &Trajectory) -> String {
    let d = tr.states[0].dim();
    let mut out = String::from("t");
    for i in 0..d {
        let _ = write!(out, ",x{i}");
    }
    for i in 0..d {
        let _ = write!(out, ",p{i}");
    }
    out.push_str(",E\n");
    for (s, e) in tr.states.iter().zip(&tr.energies) {
        let _ = write!(out, "{}", s.t);
        for v in &s.x {
            let _ = write!(out, ",{v}");
        }
        for v in &s.p {
            let _ = write!(out, ",{v}");
        }
        let _ = writeln!(out, ",{e}");
    }
    out
}

/// Energy-density profile CSV: `r,xi,H_kin,H_pot,H`.
pub fn density_csv(points: &[DensityPoint]) -> String {
    let mut out = String::from("r,xi,H_kin,H_pot,H\n");
    for p in points {
        let _ = writeln!(out, "{},{},{},{},{}", p.r, p.xi, p.kinetic, p.potential, p.total);
    }
    out
}

/// Pretty JSON with a trailing newline.
pub fn to_json_string<T: Serialize>(value: &T) -> Result<String> {
    let mut s = serde_json::to_string_pretty(value)
        .map_err(|e| crate::error::Error::Config(format!("serialization failed: {e}")))?;
    s.push('\n');
    Ok(s)
}

pub fn write_text(path: &Path, contents: &str) -> Result<()> {
    if let Some(parent) = path.parent() {
        if !parent.as_os_str().is_empty() {
            fs::create_dir_all(parent)?;
        }
    }
    fs::write(path, contents)?;
    Ok(())
}

pub fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<()> {
    write_text(path, &to_json_string(value)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::classical::{FlatCoupling, HarmonicPotential, PdmSystem, PhaseState};

    #[test]
    fn field_csv_has_exact_header() {
        let csv = field_grid_csv(&[]);
        assert_eq!(csv, "x,y,phi,b_inv,b,mass\n");
    }

    #[test]
    fn eigenfunction_csv_layout() {
        let csv = eigenfunctions_csv(&[0.5, 1.0], &[vec![1.0, 2.0], vec![3.0, 4.0]]);
        assert_eq!(csv, "r,psi0,psi1\n0.5,1,3\n1,2,4\n");
    }

    #[test]
    fn trajectory_csv_round_trips_values() {
        let coupling = FlatCoupling;
        let potential = HarmonicPotential { spring_constant: 1.0 };
        let sys = PdmSystem::new(&coupling, &potential, 1.0).unwrap();
        let s0 = PhaseState::new(0.0, vec![1.0], vec![0.0]).unwrap();
        let tr = sys.integrate(&s0, 0.25, 3).unwrap();
        let csv = trajectory_csv(&tr);
        let mut lines = csv.lines();
        assert_eq!(lines.next().unwrap(), "t,x0,p0,E");
        let first: Vec<&str> = lines.next().unwrap().split(',').collect();
        assert_eq!(first[0].parse::<f64>().unwrap(), 0.0);
        assert_eq!(first[1].parse::<f64>().unwrap(), 1.0);
        // full round-trip precision
        for line in csv.lines().skip(1) {
            for field in line.split(',') {
                let v: f64 = field.parse().unwrap();
                assert_eq!(format!("{v}"), field);
            }
        }
    }
}
