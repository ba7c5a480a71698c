//! Artifact writers: run manifests, CSV curves and fields, JSON records,
//! and quick-look PNG heatmaps.
//!
//! Every command funnels its outputs through [`Artifacts`], which creates
//! the output directory, remembers every file it writes, and finishes by
//! dropping a `manifest.json` that echoes the fully-resolved parameters —
//! the record needed to reproduce the run bit for bit.

use crate::Failure;
use dihedral::profile::PatternGrid;
use serde::Serialize;
use serde_json::{json, Value};
use std::fs::{self, File};
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

pub struct Artifacts {
    dir: PathBuf,
    command: String,
    parameters: Value,
    written: Vec<String>,
}

impl Artifacts {
    pub fn new(dir: &Path, command: &str, parameters: Value) -> Result<Self, Failure> {
        fs::create_dir_all(dir)
            .map_err(|e| Failure::usage(format!("cannot create {}: {e}", dir.display())))?;
        Ok(Self {
            dir: dir.to_path_buf(),
            command: command.to_string(),
            parameters,
            written: Vec::new(),
        })
    }

    fn open(&mut self, name: &str) -> Result<BufWriter<File>, Failure> {
        let path = self.dir.join(name);
        let file = File::create(&path)
            .map_err(|e| Failure::usage(format!("cannot write {}: {e}", path.display())))?;
        self.written.push(name.to_string());
        Ok(BufWriter::new(file))
    }

    pub fn json<T: Serialize>(&mut self, name: &str, value: &T) -> Result<(), Failure> {
        let mut w = self.open(name)?;
        serde_json::to_writer_pretty(&mut w, value)
            .map_err(|e| Failure::usage(format!("serialising {name}: {e}")))?;
        w.write_all(b"\n").ok();
        Ok(())
    }

    /// CSV with one header row; each record formatted by the caller.
    pub fn csv(
        &mut self,
        name: &str,
        header: &[&str],
        rows: impl Iterator<Item = Vec<String>>,
    ) -> Result<(), Failure> {
        let w = self.open(name)?;
        let mut out = csv::Writer::from_writer(w);
        let fail = |e: csv::Error| Failure::usage(format!("writing {name}: {e}"));
        out.write_record(header).map_err(fail)?;
        for row in rows {
            out.write_record(&row).map_err(fail)?;
        }
        out.flush()
            .map_err(|e| Failure::usage(format!("writing {name}: {e}")))
    }

    /// Renders the polar grid into a disc image, nearest-node lookup per
    /// pixel, diverging blue–white–red colours centred on zero. Assumes the
    /// angular grid is the uniform one produced by synthesis.
    pub fn heatmap(&mut self, name: &str, grid: &PatternGrid, width: u32) -> Result<(), Failure> {
        let path = self.dir.join(name);
        let img = render_disc(grid, width);
        img.save(&path)
            .map_err(|e| Failure::usage(format!("writing {}: {e}", path.display())))?;
        self.written.push(name.to_string());
        Ok(())
    }

    pub fn finish(mut self) -> Result<(), Failure> {
        let manifest = json!({
            "artifact_version": env!("CARGO_PKG_VERSION"),
            "command": self.command,
            "parameters": self.parameters,
            "outputs": self.written,
        });
        let mut w = self.open("manifest.json")?;
        serde_json::to_writer_pretty(&mut w, &manifest)
            .map_err(|e| Failure::usage(format!("writing manifest: {e}")))?;
        w.write_all(b"\n").ok();
        Ok(())
    }
}

pub fn float(x: f64) -> String {
    format!("{x:?}")
}

fn render_disc(grid: &PatternGrid, width: u32) -> image::RgbImage {
    let r_max = grid.r.last().copied().unwrap_or(0.0);
    let n_theta = grid.theta.len();
    let vmax = grid
        .u
        .iter()
        .flatten()
        .fold(0.0_f64, |m, &v| m.max(v.abs()))
        .max(f64::MIN_POSITIVE);

    image::RgbImage::from_fn(width, width, |i, j| {
        let half = (width - 1) as f64 / 2.0;
        let x = (i as f64 - half) / half * r_max;
        let y = (half - j as f64) / half * r_max;
        let r = x.hypot(y);
        if r > r_max || grid.r.is_empty() {
            return image::Rgb([255, 255, 255]);
        }
        let ri = nearest_index(&grid.r, r);
        let theta = y.atan2(x).rem_euclid(std::f64::consts::TAU);
        let ti =
            (theta / std::f64::consts::TAU * n_theta as f64).round() as usize % n_theta;
        diverging(grid.u[ri][ti] / vmax)
    })
}

fn nearest_index(sorted: &[f64], x: f64) -> usize {
    let k = sorted.partition_point(|&v| v < x);
    if k == 0 {
        return 0;
    }
    if k == sorted.len() {
        return k - 1;
    }
    if x - sorted[k - 1] <= sorted[k] - x {
        k - 1
    } else {
        k
    }
}

/// `s ∈ [−1, 1]` → blue through white to red.
fn diverging(s: f64) -> image::Rgb<u8> {
    let s = s.clamp(-1.0, 1.0);
    let chan = |c: f64| (c * 255.0).round() as u8;
    if s < 0.0 {
        image::Rgb([chan(1.0 + 0.8 * s), chan(1.0 + 0.65 * s), chan(1.0 + 0.25 * s)])
    } else {
        image::Rgb([chan(1.0 - 0.2 * s), chan(1.0 - 0.7 * s), chan(1.0 - 0.75 * s)])
    }
}
