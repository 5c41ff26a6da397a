//! JSON serialization of matrices and problem instances.
//!
//! A matrix is stored as `{"rows": r, "cols": c, "data": [[re, im], ...]}`
//! in row-major order. Loading validates shapes and rejects non-finite
//! entries; parse errors carry the line and column of the offending token.

use std::fs;
use std::path::Path;

use num_complex::Complex;
use serde::de::{DeserializeOwned, Error as _};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::jrc::JrcInstance;
use crate::matkit::ComplexMatrix;
use crate::scalar::Real;
use crate::simkit::{RadarScene, SimConfig};

pub const INSTANCE_FORMAT: &str = "dualblind-instance/1";

#[derive(Serialize)]
struct MatrixRef<'a, T> {
    rows: usize,
    cols: usize,
    data: Vec<[&'a T; 2]>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct MatrixOwned<T> {
    rows: usize,
    cols: usize,
    data: Vec<[T; 2]>,
}

impl<T: Real> Serialize for ComplexMatrix<T> {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        MatrixRef {
            rows: self.rows(),
            cols: self.cols(),
            data: self.as_slice().iter().map(|z| [&z.re, &z.im]).collect(),
        }
        .serialize(s)
    }
}

impl<'de, T: Real> Deserialize<'de> for ComplexMatrix<T> {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let raw = MatrixOwned::<T>::deserialize(d)?;
        let data = raw.data.into_iter().map(|[re, im]| Complex::new(re, im)).collect();
        ComplexMatrix::new(raw.rows, raw.cols, data).map_err(D::Error::custom)
    }
}

/// On-disk instance: the problem plus the generator settings that made it.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InstanceFile {
    pub format: String,
    pub master_seed: Option<u64>,
    pub sim: Option<SimConfig>,
    pub scene: Option<RadarScene>,
    /// Nominal radar channel, kept even when the solver runs in full mode.
    #[serde(default)]
    pub g_nominal: Option<ComplexMatrix<f64>>,
    pub instance: JrcInstance<f64>,
}

impl InstanceFile {
    pub fn new(instance: JrcInstance<f64>) -> Self {
        Self {
            format: INSTANCE_FORMAT.to_string(),
            master_seed: None,
            sim: None,
            scene: None,
            g_nominal: None,
            instance,
        }
    }
}

fn io_error(path: &Path, source: std::io::Error) -> Error {
    Error::Io {
        path: path.display().to_string(),
        source,
    }
}

pub fn parse_error(origin: &str, e: &serde_json::Error) -> Error {
    Error::Parse(format!(
        "{origin}: line {} column {}: {e}",
        e.line(),
        e.column()
    ))
}

pub fn to_json_string<S: Serialize>(value: &S) -> String {
    serde_json::to_string_pretty(value).expect("in-memory values serialize")
}

pub fn instance_from_str(text: &str, origin: &str) -> Result<InstanceFile> {
    let file: InstanceFile = serde_json::from_str(text).map_err(|e| parse_error(origin, &e))?;
    if file.format != INSTANCE_FORMAT {
        return Err(Error::Parse(format!(
            "{origin}: unsupported format {:?}, expected {INSTANCE_FORMAT:?}",
            file.format
        )));
    }
    file.instance.validate()?;
    Ok(file)
}

/// Reads and parses any JSON document; parse errors carry line and column.
pub fn load_json<T: DeserializeOwned>(path: &Path) -> Result<T> {
    let text = fs::read_to_string(path).map_err(|e| io_error(path, e))?;
    serde_json::from_str(&text).map_err(|e| parse_error(&path.display().to_string(), &e))
}

pub fn load_instance(path: &Path) -> Result<InstanceFile> {
    let text = fs::read_to_string(path).map_err(|e| io_error(path, e))?;
    instance_from_str(&text, &path.display().to_string())
}

pub fn save_instance(path: &Path, file: &InstanceFile) -> Result<()> {
    write_text(path, &to_json_string(file))
}

/// Writes `text`, creating parent directories as needed.
pub fn write_text(path: &Path, text: &str) -> Result<()> {
    if let Some(parent) = path.parent().filter(|p| !p.as_os_str().is_empty()) {
        fs::create_dir_all(parent).map_err(|e| io_error(parent, e))?;
    }
    fs::write(path, text).map_err(|e| io_error(path, e))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::simkit::{build_from_seed, SceneConfig};

    type M = ComplexMatrix<f64>;

    #[test]
    fn matrix_json_shape() {
        let m = M::from_rows(&[&[(1.0, -2.0), (0.5, 0.0)]]).unwrap();
        let text = serde_json::to_string(&m).unwrap();
        assert_eq!(text, r#"{"rows":1,"cols":2,"data":[[1.0,-2.0],[0.5,0.0]]}"#);
        assert_eq!(serde_json::from_str::<M>(&text).unwrap(), m);
    }

    #[test]
    fn matrix_roundtrip_is_exact() {
        let m: M = crate::matkit::randn_complex(3, 5, 11);
        let back: M = serde_json::from_str(&serde_json::to_string(&m).unwrap()).unwrap();
        assert_eq!(back, m);
    }

    #[test]
    fn bad_matrices_are_rejected() {
        assert!(serde_json::from_str::<M>(r#"{"rows":2,"cols":2,"data":[[1,0]]}"#).is_err());
        assert!(serde_json::from_str::<M>(r#"{"rows":0,"cols":0,"data":[]}"#).is_err());
        assert!(serde_json::from_str::<M>(r#"{"rows":1,"cols":1,"data":[[null,0]]}"#).is_err());
        assert!(serde_json::from_str::<M>(r#"{"rows":1,"cols":1,"data":[[1,0]],"x":1}"#).is_err());
    }

    #[test]
    fn instance_roundtrip() {
        let sc = build_from_seed::<f64>(&SceneConfig::default(), &SimConfig::default(), 4).unwrap();
        let mut file = InstanceFile::new(sc.instance);
        file.master_seed = Some(4);
        file.sim = Some(SimConfig::default());
        let back = instance_from_str(&to_json_string(&file), "mem").unwrap();
        assert_eq!(back, file);
    }

    #[test]
    fn truncated_instance_reports_position() {
        let sc = build_from_seed::<f64>(&SceneConfig::default(), &SimConfig::default(), 4).unwrap();
        let text = to_json_string(&InstanceFile::new(sc.instance));
        let cut = &text[..text.len() / 2];
        match instance_from_str(cut, "cut.json") {
            Err(Error::Parse(msg)) => {
                assert!(msg.starts_with("cut.json: line "), "{msg}");
                assert!(msg.contains("column"), "{msg}");
            }
            other => panic!("expected parse error, got {other:?}"),
        }
    }

    #[test]
    fn wrong_format_tag() {
        let sc = build_from_seed::<f64>(&SceneConfig::default(), &SimConfig::default(), 4).unwrap();
        let mut file = InstanceFile::new(sc.instance);
        file.format = "other".into();
        assert!(matches!(instance_from_str(&to_json_string(&file), "x"), Err(Error::Parse(_))));
    }
}
