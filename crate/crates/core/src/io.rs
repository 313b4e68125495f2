//! CSV and JSON import/export.
//!
//! Floats are written in shortest round-trip form, so every file read back
//! through the matching importer reproduces the exported values exactly.

use std::fs::File;
use std::io::{Read, Write};
use std::path::{Path, PathBuf};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::region_of;
use crate::lattice::{Coin, SpinorField, WalkMode};
use crate::spectral::{eigensystem, n_vector, KPoint, Spinor};
use crate::symmetry::{Mode, TransformedMode};

/// JSON sidecar written next to a snapshot CSV.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SnapshotMeta {
    pub mode: WalkMode,
    pub n: usize,
    pub n_tau: usize,
    pub steps: usize,
}

impl SnapshotMeta {
    pub fn for_field(field: &SpinorField, steps: usize) -> Self {
        Self { mode: field.mode(), n: field.n(), n_tau: field.n_tau(), steps }
    }
}

fn is_variable(mode: WalkMode) -> bool {
    matches!(mode, WalkMode::VariableMass)
}

pub fn write_snapshot_csv<W: Write>(field: &SpinorField, out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    let variable = is_variable(field.mode());
    if variable {
        w.write_record(["x", "tau", "re_R", "im_R", "re_L", "im_L"])?;
    } else {
        w.write_record(["x", "re_R", "im_R", "re_L", "im_L"])?;
    }
    for x in 0..field.n() {
        for tau in 0..field.n_tau() {
            let (r, l) = (field.get(Coin::R, x, tau), field.get(Coin::L, x, tau));
            let mut rec = vec![x.to_string()];
            if variable {
                rec.push(tau.to_string());
            }
            rec.extend([r.re, r.im, l.re, l.im].iter().map(f64::to_string));
            w.write_record(&rec)?;
        }
    }
    w.flush()?;
    Ok(())
}

fn parse<T: std::str::FromStr>(s: &str, what: &str, line: u64) -> Result<T> {
    s.trim()
        .parse()
        .map_err(|_| Error::InvalidParameter(format!("line {line}: cannot parse {what} from {s:?}")))
}

pub fn read_snapshot_csv<R: Read>(meta: &SnapshotMeta, input: R) -> Result<SpinorField> {
    let mut field = match meta.mode {
        WalkMode::FixedMass { mu } => SpinorField::zeros_fixed_mass(mu, meta.n)?,
        WalkMode::VariableMass => SpinorField::zeros_variable_mass(meta.n, meta.n_tau)?,
    };
    let variable = is_variable(meta.mode);
    let width = if variable { 6 } else { 5 };
    let mut rdr = csv::Reader::from_reader(input);
    let mut seen = 0usize;
    for rec in rdr.records() {
        let rec = rec?;
        let line = rec.position().map_or(0, |p| p.line());
        if rec.len() != width {
            return Err(Error::InvalidParameter(format!(
                "line {line}: expected {width} columns, found {}",
                rec.len()
            )));
        }
        let x: usize = parse(&rec[0], "x", line)?;
        let tau: usize = if variable { parse(&rec[1], "tau", line)? } else { 0 };
        if x >= field.n() || tau >= field.n_tau() {
            return Err(Error::InvalidParameter(format!("line {line}: site ({x}, {tau}) out of range")));
        }
        let o = width - 4;
        let v: Vec<f64> = (0..4).map(|i| parse(&rec[o + i], "amplitude", line)).collect::<Result<_>>()?;
        field.set(Coin::R, x, tau, Complex64::new(v[0], v[1]));
        field.set(Coin::L, x, tau, Complex64::new(v[2], v[3]));
        seen += 1;
    }
    if seen != field.n() * field.n_tau() {
        return Err(Error::InvalidParameter(format!(
            "snapshot has {seen} rows, expected {}",
            field.n() * field.n_tau()
        )));
    }
    Ok(field)
}

/// `<stem>.json` next to `<stem>.csv`.
pub fn sidecar_path(csv_path: &Path) -> PathBuf {
    csv_path.with_extension("json")
}

pub fn save_snapshot(csv_path: &Path, field: &SpinorField, steps: usize) -> Result<()> {
    write_snapshot_csv(field, File::create(csv_path)?)?;
    let meta = SnapshotMeta::for_field(field, steps);
    serde_json::to_writer_pretty(File::create(sidecar_path(csv_path))?, &meta)?;
    Ok(())
}

pub fn load_snapshot(csv_path: &Path) -> Result<(SnapshotMeta, SpinorField)> {
    let meta: SnapshotMeta = serde_json::from_reader(File::open(sidecar_path(csv_path))?)?;
    let field = read_snapshot_csv(&meta, File::open(csv_path)?)?;
    Ok((meta, field))
}

/// `−π + 2π (j + 1) / grid` for `j = 0..grid`.
pub fn brillouin_axis(grid: usize) -> Vec<f64> {
    use std::f64::consts::PI;
    (0..grid).map(|j| -PI + 2.0 * PI * (j + 1) as f64 / grid as f64).collect()
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DispersionRow {
    pub k: f64,
    pub mu: f64,
    pub omega: f64,
    pub n0: f64,
    pub n1: f64,
    pub n2: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ConeRow {
    pub k: f64,
    pub mu: f64,
    pub omega: f64,
    pub n0: f64,
    pub n1: f64,
    pub n2: f64,
    pub region: String,
}

fn shell_row(k: f64, mu: f64) -> DispersionRow {
    let p = KPoint::on_shell(k, mu);
    let n = n_vector(&p);
    DispersionRow { k, mu, omega: p.omega, n0: n.n0(), n1: n.n1(), n2: n.n2() }
}

/// Shell points on a `grid × grid` sampling of the Brillouin zone,
/// `μ` outer and `k` inner.
pub fn dispersion_grid(grid: usize) -> Vec<DispersionRow> {
    let axis = brillouin_axis(grid);
    axis.iter().flat_map(|&mu| axis.iter().map(move |&k| shell_row(k, mu))).collect()
}

pub fn cone_samples(grid: usize) -> Vec<ConeRow> {
    dispersion_grid(grid)
        .into_iter()
        .map(|r| ConeRow {
            region: region_of(r.k, r.mu).to_string(),
            k: r.k,
            mu: r.mu,
            omega: r.omega,
            n0: r.n0,
            n1: r.n1,
            n2: r.n2,
        })
        .collect()
}

pub fn write_rows<T: Serialize, W: Write>(rows: &[T], out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    for r in rows {
        w.serialize(r)?;
    }
    w.flush()?;
    Ok(())
}

pub fn read_rows<T: for<'de> Deserialize<'de>, R: Read>(input: R) -> Result<Vec<T>> {
    csv::Reader::from_reader(input).deserialize().map(|r| r.map_err(Error::from)).collect()
}

/// Reads `k,mu[,re_R,im_R,re_L,im_L]`; rows without amplitudes get the
/// `e^{+iω}` eigenvector.
pub fn read_modes<R: Read>(input: R) -> Result<Vec<Mode>> {
    let mut rdr = csv::Reader::from_reader(input);
    let headers = rdr.headers()?.clone();
    let col = |name: &str| headers.iter().position(|h| h.trim() == name);
    let (Some(ik), Some(imu)) = (col("k"), col("mu")) else {
        return Err(Error::InvalidParameter("modes file needs k and mu columns".into()));
    };
    let amp_cols: Option<Vec<usize>> = ["re_R", "im_R", "re_L", "im_L"].iter().map(|c| col(c)).collect();
    let mut modes = Vec::new();
    for rec in rdr.records() {
        let rec = rec?;
        let line = rec.position().map_or(0, |p| p.line());
        let k: f64 = parse(&rec[ik], "k", line)?;
        let mu: f64 = parse(&rec[imu], "mu", line)?;
        let spinor = match &amp_cols {
            Some(c) => {
                let v: Vec<f64> = c.iter().map(|&i| parse(&rec[i], "amplitude", line)).collect::<Result<_>>()?;
                Spinor::new(Complex64::new(v[0], v[1]), Complex64::new(v[2], v[3]))
            }
            None => eigensystem(k, mu).plus.1,
        };
        modes.push(Mode { point: KPoint::on_shell(k, mu), spinor });
    }
    Ok(modes)
}

pub fn write_modes<W: Write>(modes: &[Mode], out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["k", "mu", "re_R", "im_R", "re_L", "im_L"])?;
    for m in modes {
        let s = m.spinor;
        w.write_record(
            [m.point.k, m.point.mu, s[0].re, s[0].im, s[1].re, s[1].im].iter().map(f64::to_string),
        )?;
    }
    w.flush()?;
    Ok(())
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[allow(non_snake_case)]
pub struct TransformedRow {
    pub k: f64,
    pub mu: f64,
    pub omega: f64,
    pub k_prime: f64,
    pub mu_prime: f64,
    pub omega_prime: f64,
    pub re_R: f64,
    pub im_R: f64,
    pub re_L: f64,
    pub im_L: f64,
    pub residual: f64,
}

impl From<&TransformedMode> for TransformedRow {
    fn from(m: &TransformedMode) -> Self {
        Self {
            k: m.source.k,
            mu: m.source.mu,
            omega: m.source.omega,
            k_prime: m.point.k,
            mu_prime: m.point.mu,
            omega_prime: m.point.omega,
            re_R: m.spinor[0].re,
            im_R: m.spinor[0].im,
            re_L: m.spinor[1].re,
            im_L: m.spinor[1].im,
            residual: m.residual,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn snapshot_round_trip_is_lossless() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        for field in [
            SpinorField::zeros_fixed_mass(0.3, 8).unwrap().random(&mut rng),
            SpinorField::zeros_variable_mass(4, 6).unwrap().random(&mut rng),
        ] {
            let mut buf = Vec::new();
            write_snapshot_csv(&field, &mut buf).unwrap();
            let meta = SnapshotMeta::for_field(&field, 3);
            let back = read_snapshot_csv(&meta, buf.as_slice()).unwrap();
            assert_eq!(back, field);
        }
    }

    #[test]
    fn dispersion_rows_round_trip() {
        let rows = dispersion_grid(6);
        let mut buf = Vec::new();
        write_rows(&rows, &mut buf).unwrap();
        let back: Vec<DispersionRow> = read_rows(buf.as_slice()).unwrap();
        assert_eq!(back, rows);
        let header = String::from_utf8(buf).unwrap();
        assert!(header.starts_with("k,mu,omega,n0,n1,n2\n"));
    }

    #[test]
    fn cone_rows_carry_region() {
        let rows = cone_samples(4);
        assert_eq!(rows.len(), 16);
        let mut buf = Vec::new();
        write_rows(&rows, &mut buf).unwrap();
        let back: Vec<ConeRow> = read_rows(buf.as_slice()).unwrap();
        assert_eq!(back, rows);
    }

    #[test]
    fn modes_default_to_plus_band() {
        let modes = read_modes("k,mu\n0.2,0.1\n".as_bytes()).unwrap();
        assert_eq!(modes[0].spinor, eigensystem(0.2, 0.1).plus.1);
        let mut buf = Vec::new();
        write_modes(&modes, &mut buf).unwrap();
        let again = read_modes(buf.as_slice()).unwrap();
        assert_eq!(again[0].spinor, modes[0].spinor);
    }
}
