//! Adapter checkpoints: a JSON header per adapter plus base64-encoded
//! little-endian f64 factor payloads in column-major order.

use std::collections::BTreeMap;
use std::path::Path;

use base64::engine::general_purpose::STANDARD;
use base64::Engine;
use serde::{Deserialize, Serialize};

use crate::adapters::{AdapterFamily, AdapterMeta, AdapterState};
use crate::error::{Error, Result};
use crate::matrix::DenseMatrix;

pub const CHECKPOINT_SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Serialize, Deserialize)]
struct FactorRecord {
    name: String,
    rows: usize,
    cols: usize,
    data: String,
}

#[derive(Debug, Serialize, Deserialize)]
struct AdapterRecord {
    family: AdapterFamily,
    d: usize,
    h: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    a1: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    a2: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    b1: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    b2: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    rank: Option<usize>,
    scale: f64,
    seed: u64,
    factors: Vec<FactorRecord>,
}

#[derive(Debug, Serialize, Deserialize)]
struct CheckpointFile {
    schema_version: u32,
    adapters: BTreeMap<String, AdapterRecord>,
}

pub(crate) fn encode_f64s(values: &[f64]) -> String {
    let bytes: Vec<u8> = values.iter().flat_map(|v| v.to_le_bytes()).collect();
    STANDARD.encode(bytes)
}

pub(crate) fn decode_f64s(text: &str, expected: usize) -> Result<Vec<f64>> {
    let bytes = STANDARD
        .decode(text)
        .map_err(|e| Error::Parse(format!("bad base64 payload: {e}")))?;
    if bytes.len() != expected * 8 {
        return Err(Error::Parse(format!(
            "payload has {} bytes, expected {}",
            bytes.len(),
            expected * 8
        )));
    }
    Ok(bytes
        .chunks_exact(8)
        .map(|c| f64::from_le_bytes(c.try_into().expect("chunk of 8")))
        .collect())
}

fn to_record(state: &AdapterState) -> AdapterRecord {
    let meta = state.meta();
    let factors: Vec<FactorRecord> = state
        .factor_names()
        .iter()
        .zip(state.factors())
        .map(|(name, f)| FactorRecord {
            name: name.to_string(),
            rows: f.rows(),
            cols: f.cols(),
            data: encode_f64s(f.data()),
        })
        .collect();
    let mut rec = AdapterRecord {
        family: state.family(),
        d: meta.d,
        h: meta.h,
        a1: None,
        a2: None,
        b1: None,
        b2: None,
        rank: None,
        scale: meta.scale,
        seed: meta.seed,
        factors,
    };
    match state {
        AdapterState::Krona(k) => {
            let (a1, a2, b1, b2) = k.factor_dims();
            rec.a1 = Some(a1);
            rec.a2 = Some(a2);
            rec.b1 = Some(b1);
            rec.b2 = Some(b2);
        }
        AdapterState::Lora(l) => rec.rank = Some(l.rank()),
        AdapterState::Loha(l) => rec.rank = Some(l.rank()),
        AdapterState::Lokr(_) => {
            let fs = state.factors();
            if fs.len() == 3 {
                rec.rank = Some(fs[1].cols());
            }
        }
    }
    rec
}

fn from_record(name: &str, rec: AdapterRecord) -> Result<AdapterState> {
    let factors = rec
        .factors
        .iter()
        .map(|f| {
            if f.rows == 0 || f.cols == 0 {
                return Err(Error::Parse(format!("adapter `{name}`: factor {} has a zero dimension", f.name)));
            }
            let data = decode_f64s(&f.data, f.rows * f.cols)
                .map_err(|e| Error::Parse(format!("adapter `{name}`, factor {}: {e}", f.name)))?;
            DenseMatrix::new(f.rows, f.cols, data)
                .map_err(|e| Error::Parse(format!("adapter `{name}`, factor {}: {e}", f.name)))
        })
        .collect::<Result<Vec<_>>>()?;
    let meta = AdapterMeta {
        d: rec.d,
        h: rec.h,
        scale: rec.scale,
        seed: rec.seed,
    };
    let state = AdapterState::from_factors(rec.family, meta, factors)
        .map_err(|e| Error::Parse(format!("adapter `{name}`: {e}")))?;
    let expect = to_record(&state);
    let header = (rec.a1, rec.a2, rec.b1, rec.b2, rec.rank);
    if header != (expect.a1, expect.a2, expect.b1, expect.b2, expect.rank) {
        return Err(Error::Parse(format!("adapter `{name}`: shape fields disagree with factors")));
    }
    let names: Vec<&str> = rec.factors.iter().map(|f| f.name.as_str()).collect();
    if names != state.factor_names() {
        return Err(Error::Parse(format!("adapter `{name}`: unexpected factor names {names:?}")));
    }
    Ok(state)
}

pub fn checkpoint_to_json(states: &BTreeMap<String, AdapterState>) -> String {
    let file = CheckpointFile {
        schema_version: CHECKPOINT_SCHEMA_VERSION,
        adapters: states.iter().map(|(k, s)| (k.clone(), to_record(s))).collect(),
    };
    serde_json::to_string_pretty(&file).expect("checkpoint serializes")
}

pub fn checkpoint_from_json(text: &str) -> Result<BTreeMap<String, AdapterState>> {
    let version: serde_json::Value = serde_json::from_str(text)?;
    let found = version
        .get("schema_version")
        .and_then(|v| v.as_u64())
        .ok_or_else(|| Error::Parse("missing schema_version".into()))?;
    if found != CHECKPOINT_SCHEMA_VERSION as u64 {
        return Err(Error::SchemaVersionMismatch {
            found: found as u32,
            expected: CHECKPOINT_SCHEMA_VERSION,
        });
    }
    let file: CheckpointFile = serde_json::from_value(version)?;
    file.adapters
        .into_iter()
        .map(|(k, rec)| from_record(&k, rec).map(|s| (k, s)))
        .collect()
}

pub fn save_checkpoint(states: &BTreeMap<String, AdapterState>, path: impl AsRef<Path>) -> Result<()> {
    std::fs::write(path, checkpoint_to_json(states))?;
    Ok(())
}

pub fn load_checkpoint(path: impl AsRef<Path>) -> Result<BTreeMap<String, AdapterState>> {
    checkpoint_from_json(&std::fs::read_to_string(path)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::adapters::{build_adapter, AdapterSpec, DownInit, InitScheme, UpInit};

    fn bits(s: &AdapterState) -> Vec<Vec<u64>> {
        s.factors()
            .iter()
            .map(|f| f.data().iter().map(|v| v.to_bits()).collect())
            .collect()
    }

    #[test]
    fn krona_round_trip_is_bit_exact() {
        let init = InitScheme::new(DownInit::NormalS1, UpInit::Same);
        let s = build_adapter(
            &AdapterSpec::krona(8, 12, 2, 3)
                .with_init(init)
                .with_seed(u64::MAX - 3)
                .with_scale(0.1 + 0.2),
        )
        .unwrap();
        let map = BTreeMap::from([("attn.q".to_string(), s.clone())]);
        let back = checkpoint_from_json(&checkpoint_to_json(&map)).unwrap();
        let t = &back["attn.q"];
        assert_eq!(bits(t), bits(&s));
        assert_eq!(t.scale().to_bits(), s.scale().to_bits());
        assert_eq!(t.seed(), u64::MAX - 3);
        assert_eq!(t, &s);
    }

    #[test]
    fn empty_map_round_trips() {
        let empty = BTreeMap::new();
        assert!(checkpoint_from_json(&checkpoint_to_json(&empty)).unwrap().is_empty());
    }

    #[test]
    fn corrupted_payload_is_parse_error() {
        let s = build_adapter(&AdapterSpec::lora(4, 4, 1)).unwrap();
        let map = BTreeMap::from([("l".to_string(), s)]);
        let mut v: serde_json::Value = serde_json::from_str(&checkpoint_to_json(&map)).unwrap();
        v["adapters"]["l"]["factors"][0]["data"] = encode_f64s(&[1.0, 2.0, 3.0]).into();
        assert!(matches!(checkpoint_from_json(&v.to_string()), Err(Error::Parse(_))));
    }

    #[test]
    fn schema_version_is_checked() {
        let text = r#"{"schema_version": 7, "adapters": {}}"#;
        assert_eq!(
            checkpoint_from_json(text),
            Err(Error::SchemaVersionMismatch { found: 7, expected: 1 })
        );
        assert!(matches!(checkpoint_from_json(r#"{"adapters": {}}"#), Err(Error::Parse(_))));
    }
}
