//! Canonical test vectors.

use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::hash::hash;
use crate::params::{Instance, ParamDescriptor, SCHEMA_VERSION};

pub const ENCODING_NOTE: &str =
    "Each input byte is expanded to 8 message bits, most significant bit \
first, bytes in order; text is UTF-8. Bit 0 drives a one-step-memory step (theta0), bit 1 a \
two-step-memory step (theta1). Digests are uppercase hex of the n*m-bit value B_0||...||B_{n-1}.";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Vector {
    pub description: String,
    pub input_len: usize,
    pub digest: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InstanceVectors {
    pub instance: String,
    pub params: ParamDescriptor,
    pub vectors: Vec<Vector>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VectorFile {
    pub schema_version: u32,
    pub encoding: String,
    pub instances: Vec<InstanceVectors>,
}

/// Inputs covered by the vector file.
pub fn vector_inputs() -> Vec<(&'static str, Vec<u8>)> {
    vec![
        ("empty message", Vec::new()),
        ("ASCII \"abc\"", b"abc".to_vec()),
        ("1024 bytes of 0x00", vec![0x00; 1024]),
        ("1024 bytes of 0xFF", vec![0xFF; 1024]),
    ]
}

pub fn generate_vectors() -> Result<VectorFile> {
    let inputs = vector_inputs();
    let instances = Instance::ALL
        .iter()
        .map(|inst| {
            let params = inst.params();
            let vectors = inputs
                .iter()
                .map(|(desc, data)| {
                    Ok(Vector {
                        description: desc.to_string(),
                        input_len: data.len(),
                        digest: hash(data, &params)?.to_hex(),
                    })
                })
                .collect::<Result<_>>()?;
            Ok(InstanceVectors {
                instance: inst.name().to_string(),
                params: params.descriptor(),
                vectors,
            })
        })
        .collect::<Result<_>>()?;
    Ok(VectorFile {
        schema_version: SCHEMA_VERSION,
        encoding: ENCODING_NOTE.to_string(),
        instances,
    })
}

/// The vector file as written by `qwhash vectors`.
pub fn vectors_json() -> Result<String> {
    let mut s = serde_json::to_string_pretty(&generate_vectors()?)?;
    s.push('\n');
    Ok(s)
}
