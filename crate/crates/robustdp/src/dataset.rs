//! Point clouds in R^d with per-row corruption flags, and their CSV form.
//!
//! The CSV layout is one point per row under the header `x0,…,x{d-1}`.

use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};
use std::io::{Read, Write};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Dataset {
    pub dim: usize,
    /// Row-major `n × dim` coordinates.
    pub values: Vec<f64>,
    pub corrupted: Vec<bool>,
}

impl Dataset {
    pub fn new(dim: usize, values: Vec<f64>) -> Result<Self> {
        if dim == 0 || values.len() % dim != 0 || values.is_empty() {
            return Err(Error::InvalidParameter(format!("{} values do not form rows of width {dim}", values.len())));
        }
        if values.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidParameter("dataset has non-finite entries".into()));
        }
        let n = values.len() / dim;
        Ok(Dataset { dim, values, corrupted: vec![false; n] })
    }

    pub fn from_1d(values: &[f64]) -> Result<Self> {
        Self::new(1, values.to_vec())
    }

    pub fn n(&self) -> usize {
        self.corrupted.len()
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.values[i * self.dim..(i + 1) * self.dim]
    }

    pub fn rows(&self) -> impl Iterator<Item = &[f64]> {
        self.values.chunks(self.dim)
    }

    pub fn mean(&self) -> Vec<f64> {
        let mut m = vec![0.0; self.dim];
        for r in self.rows() {
            for (a, b) in m.iter_mut().zip(r) {
                *a += b;
            }
        }
        m.iter_mut().for_each(|a| *a /= self.n() as f64);
        m
    }

    /// Copy with row `i` replaced, as used for neighbouring datasets.
    pub fn with_row(&self, i: usize, row: &[f64]) -> Self {
        let mut out = self.clone();
        out.values[i * self.dim..(i + 1) * self.dim].copy_from_slice(row);
        out
    }

    pub fn write_csv<W: Write>(&self, w: W) -> Result<()> {
        let mut wr = csv::Writer::from_writer(w);
        let header: Vec<String> = (0..self.dim).map(|j| format!("x{j}")).collect();
        wr.write_record(&header).map_err(csv_err)?;
        for r in self.rows() {
            wr.write_record(r.iter().map(|v| v.to_string())).map_err(csv_err)?;
        }
        wr.flush()?;
        Ok(())
    }

    pub fn read_csv<R: Read>(r: R) -> Result<Self> {
        let mut rd = csv::Reader::from_reader(r);
        let header = rd.headers().map_err(csv_err)?.clone();
        let dim = header.len();
        for (j, h) in header.iter().enumerate() {
            if h.trim() != format!("x{j}") {
                return Err(Error::InvalidParameter(format!("unexpected CSV column '{h}'")));
            }
        }
        let mut values = Vec::new();
        for rec in rd.records() {
            let rec = rec.map_err(csv_err)?;
            for field in rec.iter() {
                values.push(field.trim().parse::<f64>().map_err(|e| Error::InvalidParameter(format!("'{field}': {e}")))?);
            }
        }
        Self::new(dim, values)
    }
}

fn csv_err(e: csv::Error) -> Error {
    Error::InvalidParameter(format!("csv: {e}"))
}
