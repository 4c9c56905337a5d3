//! On-disk state files: UTF-8 JSON with real and imaginary parts stored as
//! separate real arrays.

use std::fs;
use std::path::Path;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{bail_arg, Error, Result};
use crate::linalg::{ComplexMatrix, DimSpec, DEFAULT_SIZE_CAP};
use crate::states::{DensityMatrix, PureState};

pub const FORMAT_VERSION: u32 = 1;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum StateData {
    Pure { re: Vec<f64>, im: Vec<f64> },
    Mixed { re: Vec<Vec<f64>>, im: Vec<Vec<f64>> },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct StateFile {
    pub format_version: u32,
    pub dims: Vec<usize>,
    #[serde(flatten)]
    pub data: StateData,
}

#[derive(Clone, Debug, PartialEq)]
pub enum LoadedState {
    Pure(PureState),
    Mixed(DensityMatrix),
}

impl LoadedState {
    pub fn dims(&self) -> &DimSpec {
        match self {
            LoadedState::Pure(p) => p.dims(),
            LoadedState::Mixed(m) => m.dims(),
        }
    }

    pub fn kind(&self) -> &'static str {
        match self {
            LoadedState::Pure(_) => "pure",
            LoadedState::Mixed(_) => "mixed",
        }
    }

    pub fn to_density(&self) -> DensityMatrix {
        match self {
            LoadedState::Pure(p) => p.to_density(),
            LoadedState::Mixed(m) => m.clone(),
        }
    }
}

impl From<PureState> for LoadedState {
    fn from(p: PureState) -> Self {
        LoadedState::Pure(p)
    }
}

impl From<DensityMatrix> for LoadedState {
    fn from(m: DensityMatrix) -> Self {
        LoadedState::Mixed(m)
    }
}

impl StateFile {
    pub fn from_state(state: &LoadedState) -> Self {
        let dims = state.dims().dims().to_vec();
        let data = match state {
            LoadedState::Pure(p) => StateData::Pure {
                re: p.amplitudes().iter().map(|z| z.re).collect(),
                im: p.amplitudes().iter().map(|z| z.im).collect(),
            },
            LoadedState::Mixed(m) => {
                let mat = m.matrix();
                let rows = |f: fn(&Complex64) -> f64| {
                    (0..mat.rows())
                        .map(|r| (0..mat.cols()).map(|c| f(&mat[(r, c)])).collect())
                        .collect()
                };
                StateData::Mixed {
                    re: rows(|z| z.re),
                    im: rows(|z| z.im),
                }
            }
        };
        StateFile {
            format_version: FORMAT_VERSION,
            dims,
            data,
        }
    }

    pub fn into_state(self) -> Result<LoadedState> {
        if self.format_version != FORMAT_VERSION {
            return Err(Error::Format(format!(
                "unsupported format_version {} (expected {FORMAT_VERSION})",
                self.format_version
            )));
        }
        let dims = DimSpec::new(self.dims)?;
        if dims.total() > DEFAULT_SIZE_CAP {
            return Err(Error::SizeLimit {
                requested: dims.total(),
                limit: DEFAULT_SIZE_CAP,
            });
        }
        match self.data {
            StateData::Pure { re, im } => {
                if re.len() != im.len() {
                    bail_arg!("re and im have different lengths ({} vs {})", re.len(), im.len());
                }
                let amps = re.into_iter().zip(im).map(|(a, b)| Complex64::new(a, b)).collect();
                Ok(PureState::from_normalized(dims, amps)?.into())
            }
            StateData::Mixed { re, im } => {
                let n = re.len();
                if im.len() != n || re.iter().chain(&im).any(|row| row.len() != n) {
                    bail_arg!("re and im must both be {n}x{n} matrices");
                }
                let data = re
                    .iter()
                    .zip(&im)
                    .flat_map(|(a, b)| a.iter().zip(b).map(|(&x, &y)| Complex64::new(x, y)))
                    .collect();
                let m = ComplexMatrix::from_row_major(n, n, data)?;
                Ok(DensityMatrix::new(dims, m)?.into())
            }
        }
    }
}

pub fn to_json<T: Serialize>(value: &T) -> Result<String> {
    let mut s = serde_json::to_string_pretty(value).map_err(|e| Error::Format(e.to_string()))?;
    s.push('\n');
    Ok(s)
}

pub fn state_to_string(state: &LoadedState) -> Result<String> {
    to_json(&StateFile::from_state(state))
}

pub fn parse_state(text: &str) -> Result<LoadedState> {
    let file: StateFile = serde_json::from_str(text).map_err(|e| Error::Format(e.to_string()))?;
    file.into_state()
}

pub fn read_state(path: &Path) -> Result<LoadedState> {
    parse_state(&fs::read_to_string(path)?)
}

pub fn write_text(path: &Path, text: &str) -> Result<()> {
    fs::write(path, text)?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::seeded_rng;
    use crate::states::{random_mixed, random_pure, werner_2qubit};

    #[test]
    fn round_trip_is_exact() {
        let mut rng = seeded_rng(1);
        let dims = DimSpec::new(vec![2, 3]).unwrap();
        let p: LoadedState = random_pure(&dims, &mut rng).into();
        assert_eq!(parse_state(&state_to_string(&p).unwrap()).unwrap(), p);
        let m: LoadedState = random_mixed(&dims, 2, &mut rng).unwrap().into();
        assert_eq!(parse_state(&state_to_string(&m).unwrap()).unwrap(), m);
    }

    #[test]
    fn schema_fields() {
        let s = state_to_string(&werner_2qubit(0.5).unwrap().into()).unwrap();
        let v: serde_json::Value = serde_json::from_str(&s).unwrap();
        assert_eq!(v["format_version"], 1);
        assert_eq!(v["kind"], "mixed");
        assert_eq!(v["re"].as_array().unwrap().len(), 4);
    }

    #[test]
    fn rejects_bad_files() {
        let bad_version = r#"{"format_version":2,"dims":[2,2],"kind":"pure","re":[1,0,0,0],"im":[0,0,0,0]}"#;
        assert!(matches!(parse_state(bad_version), Err(Error::Format(_))));
        let unnormalized = r#"{"format_version":1,"dims":[2,2],"kind":"pure","re":[1,1,0,0],"im":[0,0,0,0]}"#;
        assert!(matches!(parse_state(unnormalized), Err(Error::Argument(_))));
        let not_psd = r#"{"format_version":1,"dims":[1,2],"kind":"mixed","re":[[2,0],[0,-1]],"im":[[0,0],[0,0]]}"#;
        assert!(matches!(parse_state(not_psd), Err(Error::NotDensityMatrix(_))));
        assert!(matches!(parse_state("{"), Err(Error::Format(_))));
    }
}
