use std::io::{Read, Write};

use num_complex::Complex64;

use super::{Frame, FrameSpec};
use crate::error::{Error, Result};
use crate::param::ParamIndex;

/// Analysis coefficients in the flat layout of the frame that produced them.
#[derive(Clone, Debug, PartialEq)]
pub struct CoefficientSet {
    frame: FrameSpec,
    grid_n: usize,
    values: Vec<Complex64>,
}

impl CoefficientSet {
    pub fn new(frame: FrameSpec, grid_n: usize, values: Vec<Complex64>) -> Self {
        Self { frame, grid_n, values }
    }

    pub fn zeros(frame: &Frame) -> Self {
        Self::new(*frame.spec(), frame.grid().n(), vec![Complex64::default(); frame.len()])
    }

    pub fn frame(&self) -> &FrameSpec {
        &self.frame
    }

    pub fn grid_n(&self) -> usize {
        self.grid_n
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    pub fn values_mut(&mut self) -> &mut [Complex64] {
        &mut self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn energy(&self) -> f64 {
        self.values.iter().map(|v| v.norm_sqr()).sum()
    }

    /// `sum_lambda a_lambda conj(b_lambda)`.
    pub fn inner(&self, other: &CoefficientSet) -> Complex64 {
        self.values.iter().zip(&other.values).map(|(a, b)| a * b.conj()).sum()
    }

    /// Positions sorted by decreasing magnitude; ties keep enumeration order.
    pub fn magnitude_order(&self) -> Vec<usize> {
        let mut order: Vec<usize> = (0..self.values.len()).collect();
        order.sort_by(|&a, &b| self.values[b].norm().total_cmp(&self.values[a].norm()));
        order
    }

    /// Magnitudes sorted in nonincreasing order.
    pub fn sorted_magnitudes(&self) -> Vec<f64> {
        let mut m: Vec<f64> = self.values.iter().map(|v| v.norm()).collect();
        m.sort_by(|a, b| b.total_cmp(a));
        m
    }

    /// Copy keeping only the given positions.
    pub fn restricted(&self, keep: &[usize]) -> CoefficientSet {
        let mut values = vec![Complex64::default(); self.values.len()];
        for &p in keep {
            values[p] = self.values[p];
        }
        Self::new(self.frame, self.grid_n, values)
    }

    /// `(sum |c|^p)^(1/p)`.
    pub fn lp_norm(&self, p: f64) -> f64 {
        self.values.iter().map(|v| v.norm().powf(p)).sum::<f64>().powf(1.0 / p)
    }

    /// CSV with columns `family,eps,j,l,k1,k2,re,im`.
    pub fn write_csv<W: Write>(&self, frame: &Frame, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(["family", "eps", "j", "l", "k1", "k2", "re", "im"])?;
        let family = self.frame.family();
        for (pos, v) in self.values.iter().enumerate() {
            let idx = frame.index(pos);
            w.write_record([
                family.to_string(),
                idx.eps.to_string(),
                idx.j.to_string(),
                idx.l.to_string(),
                idx.k[0].to_string(),
                idx.k[1].to_string(),
                crate::fmt_f64(v.re),
                crate::fmt_f64(v.im),
            ])?;
        }
        w.flush()?;
        Ok(())
    }

    /// Inverse of `write_csv`. Rows may come in any order but must cover
    /// every index of `frame` exactly once.
    pub fn read_csv<R: Read>(frame: &Frame, input: R) -> Result<Self> {
        let family = frame.spec().family();
        let mut values = vec![Complex64::default(); frame.len()];
        let mut seen = vec![false; frame.len()];
        let mut r = csv::Reader::from_reader(input);
        for (line, row) in r.records().enumerate() {
            let row = row?;
            let bad = |what: &str| Error::KeyMismatch(format!("row {}: {what}", line + 1));
            if row.len() != 8 {
                return Err(bad("expected 8 columns"));
            }
            if &row[0] != family {
                return Err(bad(&format!("family {} in a {family} frame", &row[0])));
            }
            let int = |i: usize| row[i].trim().parse::<i64>().map_err(|_| bad("malformed integer"));
            let float = |i: usize| row[i].trim().parse::<f64>().map_err(|_| bad("malformed float"));
            let idx = ParamIndex { eps: int(1)? as i32, j: int(2)? as i32, l: int(3)?, k: [int(4)?, int(5)?] };
            let pos = frame.position(&idx).ok_or_else(|| bad("index not in frame"))?;
            if std::mem::replace(&mut seen[pos], true) {
                return Err(bad("duplicate index"));
            }
            values[pos] = Complex64::new(float(6)?, float(7)?);
        }
        if let Some(missing) = seen.iter().position(|s| !s) {
            return Err(Error::KeyMismatch(format!("index {:?} missing", frame.index(missing))));
        }
        Ok(Self::new(*frame.spec(), frame.grid().n(), values))
    }
}
