//! CSV export of path ensembles (`t, path_0, ..., path_{m-1}`) with a JSON
//! sidecar carrying the grid, labels and provenance.

use std::fs::File;
use std::io::{BufWriter, Read, Write};
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use super::ensemble::{PathEnsemble, PathLabel, SimulationMethod};
use super::grid::TimeGrid;
use crate::error::{Error, Result};
use crate::scalar::Real;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Sidecar {
    pub data: String,
    pub grid: TimeGrid<f64>,
    pub method: SimulationMethod,
    pub labels: Vec<PathLabel>,
    pub provenance: serde_json::Value,
    /// The resolved run configuration, sufficient to regenerate the data.
    pub config: serde_json::Value,
}

/// Writes the ensemble as CSV; numbers use the shortest representation that
/// parses back to the same value.
pub fn write_csv<T: Real, W: Write>(ensemble: &PathEnsemble<T>, out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    let mut header = vec!["t".to_string()];
    header.extend((0..ensemble.n_paths()).map(|i| format!("path_{i}")));
    w.write_record(&header).map_err(std::io::Error::from)?;
    let mut row = Vec::with_capacity(header.len());
    for j in 0..ensemble.grid.n_nodes() {
        row.clear();
        row.push(ensemble.grid.node(j).to_string());
        row.extend(ensemble.paths().map(|p| p[j].to_string()));
        w.write_record(&row).map_err(std::io::Error::from)?;
    }
    w.flush()?;
    Ok(())
}

/// Reads a CSV written by [`write_csv`] into `(times, paths)`.
pub fn read_csv<R: Read>(input: R) -> Result<(Vec<f64>, Vec<Vec<f64>>)> {
    let mut r = csv::Reader::from_reader(input);
    let n_paths = r.headers().map_err(std::io::Error::from)?.len().saturating_sub(1);
    let mut times = Vec::new();
    let mut paths = vec![Vec::new(); n_paths];
    for rec in r.records() {
        let rec = rec.map_err(std::io::Error::from)?;
        let mut fields = rec.iter().map(|f| {
            f.parse::<f64>()
                .map_err(|e| Error::domain(format!("bad CSV number {f:?}: {e}")))
        });
        times.push(fields.next().ok_or_else(|| Error::domain("empty CSV row"))??);
        for p in paths.iter_mut() {
            p.push(fields.next().ok_or_else(|| Error::domain("short CSV row"))??);
        }
    }
    Ok((times, paths))
}

/// The sidecar path belonging to a data file: `paths.csv` -> `paths.json`.
pub fn sidecar_path(data: &Path) -> PathBuf {
    data.with_extension("json")
}

/// Writes `data` and its sidecar; returns the sidecar path.
pub fn write_ensemble<T: Real>(ensemble: &PathEnsemble<T>, data: &Path, config: serde_json::Value) -> Result<PathBuf> {
    write_csv(ensemble, BufWriter::new(File::create(data)?))?;
    let g = &ensemble.grid;
    let sidecar = Sidecar {
        data: data
            .file_name()
            .map(|s| s.to_string_lossy().into_owned())
            .unwrap_or_default(),
        grid: TimeGrid::new(g.t0().to_f64_lossy(), g.t_end().to_f64_lossy(), g.n_steps())?,
        method: ensemble.method,
        labels: ensemble.labels.clone(),
        provenance: serde_json::to_value(&ensemble.provenance)?,
        config,
    };
    let path = sidecar_path(data);
    let mut f = BufWriter::new(File::create(&path)?);
    serde_json::to_writer_pretty(&mut f, &sidecar)?;
    f.write_all(b"\n")?;
    f.flush()?;
    Ok(path)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::simulator::ensemble::ProcessKind;

    #[test]
    fn csv_round_trips_exactly() {
        let grid = TimeGrid::new(0.0, 1.0, 3).unwrap();
        let paths = vec![vec![0.0, 0.1, -1.0 / 3.0, 1e-300], vec![0.0, 2.5e10, f64::MIN_POSITIVE, -0.7]];
        let labels = (0..2)
            .map(|p| PathLabel {
                process: ProcessKind::Limit,
                alpha: None,
                seed: 1,
                replica: p,
            })
            .collect();
        let e = PathEnsemble::from_paths(grid, paths.clone(), labels, SimulationMethod::IncrementQuadrature).unwrap();
        let mut buf = Vec::new();
        write_csv(&e, &mut buf).unwrap();
        let (t, back) = read_csv(buf.as_slice()).unwrap();
        assert_eq!(t, grid.nodes());
        assert_eq!(back, paths);
        let dir = tempfile::tempdir().unwrap();
        let side = write_ensemble(&e, &dir.path().join("p.csv"), serde_json::json!({"seed": 1})).unwrap();
        let s: Sidecar = serde_json::from_reader(File::open(side).unwrap()).unwrap();
        assert_eq!(s.labels.len(), 2);
        assert_eq!(s.data, "p.csv");
    }
}
