//! File formats.
//!
//! * Ensemble CSV: header `# P=<p> K=<k> seed=<s>` (decimated ensembles add
//!   `M=<m> K0=<original length>`), then one comma-separated realization per line.
//! * Spectrum CSV `omega,value`; lag CSV `lag,value`; generalized PSD CSV `u,v,re,im`.
//! * Model JSON `{"ar": [...], "ma": [...], "variance": [...]}`.
//!
//! Floats are written in Rust's shortest round-trip form.

use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Read, Write};
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::grid::{dft_omega, FrequencyGrid};
use crate::{BiSpectrum, Decimation, Ensemble, Error, LagFunction, Result, Spectrum};

/// Filter coefficients plus an optional variance profile.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ModelDocument {
    pub ar: Vec<f64>,
    #[serde(default = "default_ma")]
    pub ma: Vec<f64>,
    #[serde(default)]
    pub variance: Vec<f64>,
}

fn default_ma() -> Vec<f64> {
    vec![1.0]
}

fn parse_f64(s: &str, line: usize) -> Result<f64> {
    s.trim().parse().map_err(|_| Error::Parse {
        line,
        msg: format!("'{}' is not a number", s.trim()),
    })
}

pub fn write_ensemble<W: Write>(ensemble: &Ensemble, mut w: W) -> Result<()> {
    write!(
        w,
        "# P={} K={} seed={}",
        ensemble.realizations(),
        ensemble.len(),
        ensemble.seed()
    )?;
    if let Some(d) = ensemble.decimation() {
        write!(w, " M={} K0={}", d.factor, d.original_len)?;
    }
    writeln!(w)?;
    for row in ensemble.data().rows() {
        let mut first = true;
        for v in row {
            if !first {
                w.write_all(b",")?;
            }
            write!(w, "{v:?}")?;
            first = false;
        }
        writeln!(w)?;
    }
    Ok(())
}

pub fn read_ensemble<R: Read>(r: R) -> Result<Ensemble> {
    let mut lines = BufReader::new(r).lines();
    let header = lines.next().ok_or(Error::Parse {
        line: 1,
        msg: "empty file".into(),
    })??;
    let fields = header.strip_prefix('#').ok_or(Error::Parse {
        line: 1,
        msg: "missing '# P=.. K=.. seed=..' header".into(),
    })?;
    let mut p = None;
    let mut k = None;
    let mut seed = 0u64;
    let mut factor = None;
    let mut original = None;
    for field in fields.split_whitespace() {
        let (key, value) = field.split_once('=').ok_or(Error::Parse {
            line: 1,
            msg: format!("bad header field '{field}'"),
        })?;
        let parse = |v: &str| -> Result<u64> {
            v.parse().map_err(|_| Error::Parse {
                line: 1,
                msg: format!("bad value '{v}' for {key}"),
            })
        };
        match key {
            "P" => p = Some(parse(value)? as usize),
            "K" => k = Some(parse(value)? as usize),
            "seed" => seed = parse(value)?,
            "M" => factor = Some(parse(value)? as usize),
            "K0" => original = Some(parse(value)? as usize),
            _ => {}
        }
    }
    let mut rows = Vec::new();
    for (i, line) in lines.enumerate() {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        let row = line
            .split(',')
            .map(|s| parse_f64(s, i + 2))
            .collect::<Result<Vec<_>>>()?;
        rows.push(row);
    }
    let ensemble = Ensemble::from_rows(rows, seed)?;
    if p.is_some_and(|p| p != ensemble.realizations()) || k.is_some_and(|k| k != ensemble.len()) {
        return Err(Error::ShapeMismatch {
            expected: format!("P={p:?} K={k:?} from header"),
            got: format!("{}x{}", ensemble.realizations(), ensemble.len()),
        });
    }
    Ok(match (factor, original) {
        (Some(factor), Some(original_len)) => ensemble.with_decimation(Decimation {
            factor,
            original_len,
        }),
        _ => ensemble,
    })
}

/// Writes `omega,value` rows after checking the spectrum invariants.
pub fn write_spectrum<W: Write>(spectrum: &Spectrum, mut w: W) -> Result<()> {
    spectrum.validate()?;
    writeln!(w, "omega,value")?;
    for (o, v) in spectrum.omegas().iter().zip(spectrum.values()) {
        writeln!(w, "{o:?},{v:?}")?;
    }
    Ok(())
}

/// Reads `omega,value` rows; a grid matching the centered DFT layout is
/// recognised as such.
pub fn read_spectrum<R: Read>(r: R) -> Result<Spectrum> {
    let rows = read_table(r, "omega,value", 2)?;
    let omegas: Vec<f64> = rows.iter().map(|r| r[0]).collect();
    let values = rows.iter().map(|r| r[1]).collect();
    let n = omegas.len();
    let is_dft = omegas
        .iter()
        .enumerate()
        .all(|(m, &w)| (w - dft_omega(m, n)).abs() <= 1e-12);
    let grid = if is_dft {
        FrequencyGrid::dft(n)
    } else {
        FrequencyGrid::Custom(omegas)
    };
    Spectrum::new(grid, values)
}

pub fn write_lag_function<W: Write>(lag: &LagFunction, mut w: W) -> Result<()> {
    writeln!(w, "lag,value")?;
    for (t, v) in lag.lags().zip(lag.values()) {
        writeln!(w, "{t},{v:?}")?;
    }
    Ok(())
}

pub fn read_lag_function<R: Read>(r: R) -> Result<LagFunction> {
    let rows = read_table(r, "lag,value", 2)?;
    let max_lag = rows.len() / 2;
    for (i, row) in rows.iter().enumerate() {
        if row[0] != i as f64 - max_lag as f64 {
            return Err(Error::Parse {
                line: i + 2,
                msg: "lags must run from -L to L".into(),
            });
        }
    }
    LagFunction::new(max_lag, rows.iter().map(|r| r[1]).collect())
}

pub fn write_bispectrum<W: Write>(bs: &BiSpectrum, mut w: W) -> Result<()> {
    bs.validate()?;
    writeln!(w, "u,v,re,im")?;
    let us = bs.u_grid().omegas();
    let vs = bs.v_grid().omegas();
    for (iu, u) in us.iter().enumerate() {
        for (iv, v) in vs.iter().enumerate() {
            let z = bs.get(iu, iv);
            writeln!(w, "{u:?},{v:?},{:?},{:?}", z.re, z.im)?;
        }
    }
    Ok(())
}

fn read_table<R: Read>(r: R, header: &str, cols: usize) -> Result<Vec<Vec<f64>>> {
    let mut lines = BufReader::new(r).lines();
    let first = lines.next().ok_or(Error::Parse {
        line: 1,
        msg: "empty file".into(),
    })??;
    if first.trim() != header {
        return Err(Error::Parse {
            line: 1,
            msg: format!("expected header '{header}'"),
        });
    }
    let mut rows = Vec::new();
    for (i, line) in lines.enumerate() {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        let row = line
            .split(',')
            .map(|s| parse_f64(s, i + 2))
            .collect::<Result<Vec<_>>>()?;
        if row.len() != cols {
            return Err(Error::Parse {
                line: i + 2,
                msg: format!("expected {cols} columns"),
            });
        }
        rows.push(row);
    }
    Ok(rows)
}

pub fn create(path: &Path) -> Result<BufWriter<File>> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        std::fs::create_dir_all(dir)?;
    }
    Ok(BufWriter::new(File::create(path)?))
}

pub fn open(path: &Path) -> Result<File> {
    Ok(File::open(path)?)
}

pub fn write_json<T: Serialize, W: Write>(value: &T, mut w: W) -> Result<()> {
    serde_json::to_writer_pretty(&mut w, value)?;
    writeln!(w)?;
    Ok(())
}
