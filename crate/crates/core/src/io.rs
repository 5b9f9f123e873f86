//! JSON net documents and Wavefront OBJ export.

use std::collections::BTreeMap;
use std::fs;
use std::io::{BufWriter, Write};
use std::path::Path;

use serde::{Deserialize, Serialize};
use serde_json::{Map, Value};

use crate::error::{Error, Result};
use crate::lattice::{LatticeWindow, Net};
use crate::quat::Quaternion;

pub const FORMAT_VERSION: &str = "isonet-net/1";

const LINEAGE_KEY: &str = "lineage";

#[derive(Copy, Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TransformKind {
    Christoffel,
    Darboux,
    CmcDarboux,
    Bianchi,
}

/// One step of the transform history stored with a net.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TransformRecord {
    pub kind: TransformKind,
    #[serde(default)]
    pub parameters: BTreeMap<String, Value>,
    #[serde(default)]
    pub residuals: BTreeMap<String, f64>,
}

impl TransformRecord {
    pub fn new(kind: TransformKind) -> Self {
        Self {
            kind,
            parameters: BTreeMap::new(),
            residuals: BTreeMap::new(),
        }
    }

    pub fn parameter(mut self, key: &str, value: impl Into<Value>) -> Self {
        self.parameters.insert(key.to_owned(), value.into());
        self
    }

    pub fn residual(mut self, key: &str, value: f64) -> Self {
        self.residuals.insert(key.to_owned(), value);
        self
    }
}

/// Serialized form of a net: window, row-major `(w, x, y, z)` values and
/// free-form metadata.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct NetDocument {
    pub format_version: String,
    pub window: LatticeWindow,
    pub values: Vec<[f64; 4]>,
    #[serde(default)]
    pub metadata: Map<String, Value>,
}

impl NetDocument {
    pub fn from_net(net: &Net) -> Self {
        Self {
            format_version: FORMAT_VERSION.to_owned(),
            window: *net.window(),
            values: net.values().iter().map(|q| q.to_array()).collect(),
            metadata: Map::new(),
        }
    }

    pub fn to_net(&self) -> Result<Net> {
        Net::new(
            self.window,
            self.values.iter().map(|a| Quaternion::from_array(*a)).collect(),
        )
    }

    pub fn lineage(&self) -> Result<Vec<TransformRecord>> {
        match self.metadata.get(LINEAGE_KEY) {
            None => Ok(Vec::new()),
            Some(v) => serde_json::from_value(v.clone()).map_err(|e| Error::Format(e.to_string())),
        }
    }

    /// Appends a record to the lineage.
    pub fn push_record(&mut self, record: TransformRecord) -> Result<()> {
        let mut lineage = self.lineage()?;
        lineage.push(record);
        let value = serde_json::to_value(lineage).map_err(|e| Error::Format(e.to_string()))?;
        self.metadata.insert(LINEAGE_KEY.to_owned(), value);
        Ok(())
    }

    pub fn to_json(&self) -> Result<String> {
        serde_json::to_string_pretty(self).map_err(|e| Error::Format(e.to_string()))
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let raw: Value = serde_json::from_str(text).map_err(|e| Error::Format(e.to_string()))?;
        match raw.get("format_version").and_then(Value::as_str) {
            Some(FORMAT_VERSION) => {}
            Some(other) => return Err(Error::Version(other.to_owned())),
            None => return Err(Error::Format("missing format_version".into())),
        }
        let doc: NetDocument = serde_json::from_value(raw).map_err(|e| Error::Format(e.to_string()))?;
        doc.window.validate()?;
        if doc.values.len() != doc.window.len() {
            return Err(Error::ValueCount {
                expected: doc.window.len(),
                got: doc.values.len(),
            });
        }
        Ok(doc)
    }
}

pub fn save_net(path: impl AsRef<Path>, doc: &NetDocument) -> Result<()> {
    fs::write(path, doc.to_json()? + "\n")?;
    Ok(())
}

pub fn load_net(path: impl AsRef<Path>) -> Result<NetDocument> {
    NetDocument::from_json(&fs::read_to_string(path)?)
}

/// What [`write_obj`] emitted.
#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub struct ObjSummary {
    pub vertices: usize,
    pub faces: usize,
    /// The net had non-zero real parts, which were dropped.
    pub projected: bool,
}

/// Writes one `v` line per vertex (imaginary part) and one quad `f` per
/// elementary quadrilateral, seam faces of periodic nets included.
pub fn write_obj(net: &Net, out: &mut impl Write) -> Result<ObjSummary> {
    let window = net.window();
    let projected = net.max_real() > 1e-12 * net.diameter().max(1.0);
    writeln!(out, "# {}x{} net", window.width, window.height)?;
    for q in net.values() {
        writeln!(out, "v {} {} {}", q.x, q.y, q.z)?;
    }
    let quads = window.quads();
    for d in &quads {
        let ids = d
            .corners()
            .map(|(m, n)| window.offset(m, n).expect("quad corners lie in the window") + 1);
        writeln!(out, "f {} {} {} {}", ids[0], ids[1], ids[2], ids[3])?;
    }
    Ok(ObjSummary {
        vertices: net.values().len(),
        faces: quads.len(),
        projected,
    })
}

pub fn export_obj(net: &Net, path: impl AsRef<Path>) -> Result<ObjSummary> {
    let mut out = BufWriter::new(fs::File::create(path)?);
    let summary = write_obj(net, &mut out)?;
    out.flush()?;
    Ok(summary)
}
