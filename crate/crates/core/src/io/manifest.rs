use std::collections::HashSet;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub enum LayerGroup {
    Q,
    K,
    V,
    O,
    #[default]
    #[serde(rename = "other")]
    Other,
}

/// One adaptable layer: maps `R^h → R^d`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LayerSpec {
    pub layer_name: String,
    pub d: usize,
    pub h: usize,
    #[serde(default)]
    pub group: LayerGroup,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LayerManifest {
    pub name: String,
    pub layers: Vec<LayerSpec>,
}

// Signed dims so that zero and negative values reach validation instead of
// failing inside serde with a less useful message.
#[derive(Deserialize)]
struct RawLayer {
    layer_name: String,
    d: i64,
    h: i64,
    #[serde(default)]
    group: LayerGroup,
}

#[derive(Deserialize)]
struct RawManifest {
    name: String,
    layers: Vec<RawLayer>,
}

impl LayerManifest {
    pub fn from_json(text: &str) -> Result<Self> {
        let raw: RawManifest = serde_json::from_str(text)?;
        let mut seen = HashSet::new();
        let mut layers = Vec::with_capacity(raw.layers.len());
        for l in raw.layers {
            for (field, v) in [("d", l.d), ("h", l.h)] {
                if v <= 0 {
                    return Err(Error::NonPositiveDim {
                        layer: l.layer_name.clone(),
                        field: field.into(),
                    });
                }
            }
            if !seen.insert(l.layer_name.clone()) {
                return Err(Error::DuplicateLayer(l.layer_name));
            }
            layers.push(LayerSpec {
                layer_name: l.layer_name,
                d: l.d as usize,
                h: l.h as usize,
                group: l.group,
            });
        }
        Ok(Self {
            name: raw.name,
            layers,
        })
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("manifest serializes")
    }
}

pub fn load_manifest(path: impl AsRef<Path>) -> Result<LayerManifest> {
    LayerManifest::from_json(&std::fs::read_to_string(path)?)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_valid_manifest() {
        let m = LayerManifest::from_json(
            r#"{"name":"toy","layers":[
                {"layer_name":"attn.q","d":8,"h":8,"group":"Q"},
                {"layer_name":"ff","d":6,"h":8}]}"#,
        )
        .unwrap();
        assert_eq!(m.layers.len(), 2);
        assert_eq!(m.layers[0].group, LayerGroup::Q);
        assert_eq!(m.layers[1].group, LayerGroup::Other);
        assert_eq!(LayerManifest::from_json(&m.to_json()).unwrap(), m);
    }

    #[test]
    fn rejects_duplicates_and_bad_dims() {
        let dup = r#"{"name":"x","layers":[{"layer_name":"a","d":2,"h":2},{"layer_name":"a","d":2,"h":2}]}"#;
        assert_eq!(LayerManifest::from_json(dup), Err(Error::DuplicateLayer("a".into())));
        let zero = r#"{"name":"x","layers":[{"layer_name":"a","d":0,"h":2}]}"#;
        assert_eq!(
            LayerManifest::from_json(zero),
            Err(Error::NonPositiveDim { layer: "a".into(), field: "d".into() })
        );
        assert!(matches!(LayerManifest::from_json("{"), Err(Error::Parse(_))));
        let missing = r#"{"name":"x","layers":[{"layer_name":"a","d":2}]}"#;
        match LayerManifest::from_json(missing) {
            Err(Error::Parse(msg)) => assert!(msg.contains("`h`"), "{msg}"),
            other => panic!("unexpected {other:?}"),
        }
    }
}
