use std::str::FromStr;

use super::{ColumnDescriptor, Entries, FeatureMatrix};
use crate::error::{Error, Result};

/// How to turn counts into real-valued features.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum EncodingSpec {
    /// Exact values, unchanged.
    Raw,
    /// `ln(1 + x)`.
    Log1p,
    /// Per-column `(x - mean) / std` with the population standard deviation;
    /// constant columns use `std = 1`.
    ZScore,
    /// Each value expands to `pe_dim` columns: for pair `i`,
    /// `sin(x / 10000^(2i/pe_dim))` and `cos(x / 10000^(2i/pe_dim))`.
    Sinusoidal { pe_dim: usize },
}

impl FromStr for EncodingSpec {
    type Err = Error;

    /// `raw`, `log1p`, `zscore`, or `sinusoidal:<pe_dim>`.
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "raw" => Ok(EncodingSpec::Raw),
            "log1p" => Ok(EncodingSpec::Log1p),
            "zscore" => Ok(EncodingSpec::ZScore),
            _ => {
                let dim = s
                    .strip_prefix("sinusoidal:")
                    .or_else(|| s.strip_prefix("pe:"))
                    .and_then(|d| d.parse::<usize>().ok())
                    .ok_or_else(|| Error::Config(format!("unknown encoding {s:?}")))?;
                Ok(EncodingSpec::Sinusoidal { pe_dim: dim })
            }
        }
    }
}

pub fn encode(m: &FeatureMatrix, spec: EncodingSpec) -> Result<FeatureMatrix> {
    let values = m.to_real();
    let (columns, rows) = match spec {
        EncodingSpec::Raw => return Ok(m.clone()),
        EncodingSpec::Log1p => {
            let mut rows = values;
            for x in rows.iter_mut().flatten() {
                if *x <= -1.0 {
                    return Err(Error::Encoding(format!("log1p undefined for {x}")));
                }
                *x = x.ln_1p();
            }
            (m.columns.clone(), rows)
        }
        EncodingSpec::ZScore => {
            if m.row_count() < 2 {
                return Err(Error::Encoding("zscore needs at least two rows".into()));
            }
            let rows_n = m.row_count() as f64;
            let mut rows = values;
            for c in 0..m.column_count() {
                let mean = rows.iter().map(|r| r[c]).sum::<f64>() / rows_n;
                let var = rows.iter().map(|r| (r[c] - mean).powi(2)).sum::<f64>() / rows_n;
                let std = if var > 0.0 { var.sqrt() } else { 1.0 };
                for r in rows.iter_mut() {
                    r[c] = (r[c] - mean) / std;
                }
            }
            (m.columns.clone(), rows)
        }
        EncodingSpec::Sinusoidal { pe_dim } => {
            if pe_dim == 0 || pe_dim % 2 != 0 {
                return Err(Error::Encoding(format!(
                    "pe_dim must be a positive even number, got {pe_dim}"
                )));
            }
            let scales: Vec<f64> = (0..pe_dim / 2)
                .map(|i| 10000f64.powf(2.0 * i as f64 / pe_dim as f64))
                .collect();
            let mut columns = Vec::with_capacity(m.column_count() * pe_dim);
            for c in &m.columns {
                for i in 0..pe_dim / 2 {
                    for wave in ["sin", "cos"] {
                        columns.push(ColumnDescriptor {
                            component: Some(format!("{wave}{i}")),
                            ..c.clone()
                        });
                    }
                }
            }
            let rows = values
                .iter()
                .map(|r| {
                    r.iter()
                        .flat_map(|&x| {
                            scales
                                .iter()
                                .flat_map(move |s| [(x / s).sin(), (x / s).cos()])
                        })
                        .collect()
                })
                .collect();
            (columns, rows)
        }
    };
    Ok(FeatureMatrix {
        row_ids: m.row_ids.clone(),
        columns,
        entries: Entries::Real(rows),
        failures: m.failures.clone(),
    })
}
