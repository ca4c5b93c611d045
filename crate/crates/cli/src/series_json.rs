//! `{level, degree, coeffs}` with `coeffs[k][j] = [w, x, y, z]`, the right
//! coefficient of `q̄^k q^j`.

use serde::{Deserialize, Serialize};

use qslice::{PolySliceSeries, Quaternion};

use crate::error::CliError;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SeriesJson {
    pub level: usize,
    pub degree: usize,
    pub coeffs: Vec<Vec<[f64; 4]>>,
}

impl SeriesJson {
    pub fn from_series(s: &PolySliceSeries) -> Self {
        let coeffs = (0..=s.level())
            .map(|k| {
                (0..=s.degree())
                    .map(|j| {
                        let c = s.coeff(k, j);
                        [c.w, c.x, c.y, c.z]
                    })
                    .collect()
            })
            .collect();
        Self {
            level: s.level(),
            degree: s.degree(),
            coeffs,
        }
    }

    pub fn to_series(&self) -> Result<PolySliceSeries, CliError> {
        if self.coeffs.len() != self.level + 1 {
            return Err(CliError::Usage(format!(
                "series has {} rows, level {} needs {}",
                self.coeffs.len(),
                self.level,
                self.level + 1
            )));
        }
        if let Some((k, row)) = self.coeffs.iter().enumerate().find(|(_, r)| r.len() != self.degree + 1) {
            return Err(CliError::Usage(format!(
                "series row {k} has {} entries, degree {} needs {}",
                row.len(),
                self.degree,
                self.degree + 1
            )));
        }
        Ok(PolySliceSeries::from_rows(
            self.coeffs
                .iter()
                .map(|r| r.iter().map(|&[w, x, y, z]| Quaternion::new(w, x, y, z)).collect())
                .collect(),
        ))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip() {
        let s = PolySliceSeries::<f64>::hermite_q(2, 1).mul_right(Quaternion::new(1.0, -2.0, 0.5, 0.0));
        let j = SeriesJson::from_series(&s);
        assert_eq!((j.level, j.degree), (1, 2));
        let text = serde_json::to_string(&j).unwrap();
        let back: SeriesJson = serde_json::from_str(&text).unwrap();
        assert_eq!(back.to_series().unwrap(), s);
    }

    #[test]
    fn shape_mismatch_is_reported() {
        let j: SeriesJson = serde_json::from_str(r#"{"level":1,"degree":0,"coeffs":[[[1,0,0,0]]]}"#).unwrap();
        assert!(j.to_series().is_err());
        let j: SeriesJson = serde_json::from_str(r#"{"level":0,"degree":1,"coeffs":[[[1,0,0,0]]]}"#).unwrap();
        assert!(j.to_series().is_err());
    }
}
