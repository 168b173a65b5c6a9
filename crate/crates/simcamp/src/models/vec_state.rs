//! Key codec shared by the continuous-state models: the state vector's
//! exact f64 bit patterns, little-endian, concatenated in order.

use crate::des::StateKey;
use crate::error::Error;

pub fn encode<const N: usize>(state: &[f64; N]) -> StateKey {
    let mut bytes = Vec::with_capacity(8 * N);
    for v in state {
        bytes.extend_from_slice(&v.to_le_bytes());
    }
    StateKey::from_bytes(bytes)
}

pub fn decode<const N: usize>(key: &StateKey) -> Result<[f64; N], Error> {
    let bytes = key.as_bytes();
    if bytes.len() != 8 * N {
        return Err(Error::Codec(format!(
            "state key has {} bytes, expected {}",
            bytes.len(),
            8 * N
        )));
    }
    let mut out = [0.0; N];
    for (i, chunk) in bytes.chunks_exact(8).enumerate() {
        out[i] = f64::from_le_bytes(chunk.try_into().unwrap());
        if !out[i].is_finite() {
            return Err(Error::Codec(format!("state component {i} is not finite")));
        }
    }
    Ok(out)
}

/// Parse either a hex bit-pattern literal (`0x` prefix) or a
/// comma-separated decimal vector. Decimal input is converted to f64 and
/// re-encoded, so the key always comes from the bit pattern.
pub fn parse<const N: usize>(literal: &str) -> Result<StateKey, Error> {
    let literal = literal.trim();
    if let Some(hex) = literal.strip_prefix("0x") {
        let key = StateKey::parse_hex(hex)?;
        decode::<N>(&key)?;
        return Ok(key);
    }
    let parts: Vec<&str> = literal.split(',').collect();
    if parts.len() != N {
        return Err(Error::Codec(format!(
            "state literal has {} components, expected {N}",
            parts.len()
        )));
    }
    let mut state = [0.0f64; N];
    for (i, p) in parts.iter().enumerate() {
        state[i] = p
            .trim()
            .parse()
            .map_err(|_| Error::Codec(format!("bad state component {p:?}")))?;
        if !state[i].is_finite() {
            return Err(Error::Codec(format!("state component {p:?} is not finite")));
        }
    }
    Ok(encode(&state))
}

pub fn format(key: &StateKey) -> String {
    format!("0x{}", key.to_hex())
}
