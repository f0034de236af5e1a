//! Sampled functions on uniform rectangular grids.

use std::io::{BufRead, BufReader, Read, Write};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::Region;

/// A box split into `resolution[k]` equal cells along axis `k`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GridShape {
    #[serde(rename = "box")]
    pub bounds: Vec<[f64; 2]>,
    pub resolution: Vec<usize>,
}

impl GridShape {
    pub fn new(bounds: Vec<[f64; 2]>, resolution: Vec<usize>) -> Result<Self> {
        let shape = GridShape { bounds, resolution };
        shape.validate()?;
        Ok(shape)
    }

    /// `[−r, r]ⁿ` with `cells` cells per axis.
    pub fn cube(dim: usize, r: f64, cells: usize) -> Result<Self> {
        GridShape::new(vec![[-r, r]; dim], vec![cells; dim])
    }

    pub fn validate(&self) -> Result<()> {
        let n = self.bounds.len();
        if !(1..=2).contains(&n) || self.resolution.len() != n {
            return Err(Error::Argument(format!("grids are 1D or 2D, got {n} axes")));
        }
        for (k, ([lo, hi], &m)) in self.bounds.iter().zip(&self.resolution).enumerate() {
            if !(lo.is_finite() && hi.is_finite() && lo < hi) || m == 0 {
                return Err(Error::Argument(format!("axis {k}: box [{lo}, {hi}] with {m} cells")));
            }
        }
        Ok(())
    }

    pub fn dim(&self) -> usize {
        self.bounds.len()
    }

    pub fn len(&self) -> usize {
        self.resolution.iter().product()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Cell widths per axis.
    pub fn spacing(&self) -> Vec<f64> {
        self.bounds.iter().zip(&self.resolution).map(|([lo, hi], &m)| (hi - lo) / m as f64).collect()
    }

    pub fn cell_volume(&self) -> f64 {
        self.spacing().iter().product()
    }

    pub fn volume(&self) -> f64 {
        self.bounds.iter().map(|[lo, hi]| hi - lo).product()
    }

    /// Multi-index of a flat row-major index (last axis fastest).
    pub fn multi_index(&self, flat: usize) -> Vec<usize> {
        let mut idx = vec![0; self.dim()];
        let mut rem = flat;
        for k in (0..self.dim()).rev() {
            idx[k] = rem % self.resolution[k];
            rem /= self.resolution[k];
        }
        idx
    }

    pub fn center(&self, flat: usize) -> Vec<f64> {
        let h = self.spacing();
        self.multi_index(flat)
            .iter()
            .enumerate()
            .map(|(k, &i)| self.bounds[k][0] + (i as f64 + 0.5) * h[k])
            .collect()
    }

    pub fn centers(&self) -> Vec<Vec<f64>> {
        (0..self.len()).map(|i| self.center(i)).collect()
    }
}

/// Nonnegative values at the cell centers of a [`GridShape`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GridFunction {
    #[serde(flatten)]
    pub shape: GridShape,
    pub values: Vec<f64>,
}

impl GridFunction {
    pub fn new(shape: GridShape, values: Vec<f64>) -> Result<Self> {
        shape.validate()?;
        if values.len() != shape.len() {
            return Err(Error::Argument(format!("{} values for {} cells", values.len(), shape.len())));
        }
        if let Some(v) = values.iter().find(|v| !(v.is_finite() && **v >= 0.0)) {
            return Err(Error::Argument(format!("grid values must be finite and ≥ 0, found {v}")));
        }
        Ok(GridFunction { shape, values })
    }

    /// Sample `|f|` at the cell centers.
    pub fn from_fn(shape: GridShape, f: impl Fn(&[f64]) -> f64) -> Result<Self> {
        let values = (0..shape.len()).map(|i| f(&shape.center(i)).abs()).collect();
        GridFunction::new(shape, values)
    }

    pub fn constant(shape: GridShape, c: f64) -> Result<Self> {
        let n = shape.len();
        GridFunction::new(shape, vec![c.abs(); n])
    }

    /// `χ_E` for a region `E` (cell in iff its center is).
    pub fn indicator(shape: GridShape, region: &Region) -> Result<Self> {
        GridFunction::from_fn(shape, |x| if region.contains(x) { 1.0 } else { 0.0 })
    }

    pub fn dim(&self) -> usize {
        self.shape.dim()
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn cell_volume(&self) -> f64 {
        self.shape.cell_volume()
    }

    pub fn is_zero(&self) -> bool {
        self.values.iter().all(|&v| v == 0.0)
    }

    pub fn scaled(&self, c: f64) -> GridFunction {
        GridFunction { shape: self.shape.clone(), values: self.values.iter().map(|v| v * c.abs()).collect() }
    }

    pub fn max_value(&self) -> f64 {
        self.values.iter().copied().fold(0.0, f64::max)
    }

    /// `∫ f` by the midpoint rule.
    pub fn integral(&self) -> f64 {
        pairwise_sum(&self.values) * self.cell_volume()
    }

    /// Measure of the support, counted in whole cells.
    pub fn support_measure(&self) -> f64 {
        self.values.iter().filter(|&&v| v > 0.0).count() as f64 * self.cell_volume()
    }

    /// CSV with header `index,x0[,x1],value`.
    pub fn write_csv<W: Write>(&self, mut w: W) -> Result<()> {
        let coords: Vec<String> = (0..self.dim()).map(|k| format!("x{k}")).collect();
        writeln!(w, "index,{},value", coords.join(","))?;
        for (i, v) in self.values.iter().enumerate() {
            let c: Vec<String> = self.shape.center(i).iter().map(|x| format!("{x:e}")).collect();
            writeln!(w, "{i},{},{v:e}", c.join(","))?;
        }
        Ok(())
    }

    /// Read the CSV written by [`write_csv`](Self::write_csv); the shape is not
    /// stored in CSV and must be supplied.
    pub fn read_csv<R: Read>(shape: GridShape, r: R) -> Result<Self> {
        let mut values = vec![f64::NAN; shape.len()];
        for (line_no, line) in BufReader::new(r).lines().enumerate().skip(1) {
            let line = line?;
            if line.trim().is_empty() {
                continue;
            }
            let fields: Vec<&str> = line.split(',').collect();
            let bad = || Error::Parse { pointer: format!("line {}", line_no + 1), message: format!("malformed row {line:?}") };
            let idx: usize = fields.first().and_then(|s| s.trim().parse().ok()).ok_or_else(bad)?;
            let v: f64 = fields.last().and_then(|s| s.trim().parse().ok()).ok_or_else(bad)?;
            *values.get_mut(idx).ok_or_else(bad)? = v;
        }
        if values.iter().any(|v| v.is_nan()) {
            return Err(Error::Parse { pointer: "/".into(), message: "CSV does not cover every cell".into() });
        }
        GridFunction::new(shape, values)
    }

    /// Binary form: `u32` axis count, per-axis `(f64 lo, f64 hi)`, per-axis `u64`
    /// resolution, then row-major `f64` values; all little-endian.
    pub fn write_binary<W: Write>(&self, mut w: W) -> Result<()> {
        w.write_all(&(self.dim() as u32).to_le_bytes())?;
        for [lo, hi] in &self.shape.bounds {
            w.write_all(&lo.to_le_bytes())?;
            w.write_all(&hi.to_le_bytes())?;
        }
        for &m in &self.shape.resolution {
            w.write_all(&(m as u64).to_le_bytes())?;
        }
        for v in &self.values {
            w.write_all(&v.to_le_bytes())?;
        }
        Ok(())
    }

    pub fn read_binary<R: Read>(mut r: R) -> Result<Self> {
        let mut b4 = [0u8; 4];
        let mut b8 = [0u8; 8];
        r.read_exact(&mut b4)?;
        let n = u32::from_le_bytes(b4) as usize;
        if !(1..=2).contains(&n) {
            return Err(Error::Parse { pointer: "header".into(), message: format!("axis count {n}") });
        }
        let mut f64_at = |r: &mut R| -> Result<f64> {
            r.read_exact(&mut b8)?;
            Ok(f64::from_le_bytes(b8))
        };
        let mut bounds = Vec::with_capacity(n);
        for _ in 0..n {
            bounds.push([f64_at(&mut r)?, f64_at(&mut r)?]);
        }
        let mut resolution = Vec::with_capacity(n);
        for _ in 0..n {
            r.read_exact(&mut b8)?;
            resolution.push(u64::from_le_bytes(b8) as usize);
        }
        let shape = GridShape::new(bounds, resolution)?;
        let mut values = Vec::with_capacity(shape.len());
        for _ in 0..shape.len() {
            r.read_exact(&mut b8)?;
            values.push(f64::from_le_bytes(b8));
        }
        GridFunction::new(shape, values)
    }
}

/// Pairwise (cascade) summation; the result does not depend on thread scheduling.
pub fn pairwise_sum(xs: &[f64]) -> f64 {
    if xs.len() <= 32 {
        return xs.iter().sum();
    }
    let mid = xs.len() / 2;
    pairwise_sum(&xs[..mid]) + pairwise_sum(&xs[mid..])
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn centers_and_volume() {
        let s = GridShape::new(vec![[0.0, 1.0], [0.0, 2.0]], vec![2, 4]).unwrap();
        assert_eq!(s.cell_volume(), 0.25);
        assert_eq!(s.center(0), vec![0.25, 0.25]);
        assert_eq!(s.center(5), vec![0.75, 0.75]);
        assert_eq!(s.multi_index(7), vec![1, 3]);
    }

    #[test]
    fn rejects_negative_values() {
        let s = GridShape::cube(1, 1.0, 2).unwrap();
        assert!(GridFunction::new(s.clone(), vec![1.0, -1.0]).is_err());
        assert!(GridFunction::new(s, vec![1.0]).is_err());
    }

    #[test]
    fn io_round_trips() {
        let s = GridShape::cube(2, 3.0, 5).unwrap();
        let f = GridFunction::from_fn(s.clone(), |x| x[0] * x[1]).unwrap();
        let mut bin = Vec::new();
        f.write_binary(&mut bin).unwrap();
        assert_eq!(bin.len(), 4 + 2 * 16 + 2 * 8 + 25 * 8);
        assert_eq!(GridFunction::read_binary(&bin[..]).unwrap(), f);
        let mut csv = Vec::new();
        f.write_csv(&mut csv).unwrap();
        assert_eq!(GridFunction::read_csv(s, &csv[..]).unwrap(), f);
    }

    #[test]
    fn pairwise_matches_naive() {
        let xs: Vec<f64> = (0..1000).map(|i| i as f64).collect();
        assert_eq!(pairwise_sum(&xs), 499500.0);
    }
}
