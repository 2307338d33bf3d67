//! The `PFXC` container.
//!
//! Layout, all integers unsigned LEB128 unless noted:
//!
//! | field | encoding |
//! |---|---|
//! | magic | `PFXC` |
//! | version | byte, currently 1 |
//! | scheme id | byte |
//! | flags | byte: bit 0 fallback, bit 1 binary search, bit 2 remap present |
//! | `n`, `N` | varints |
//! | remap | `n` signed deltas between consecutive raw values, if flagged |
//! | model | scheme specific |
//! | payload bits | varint |
//! | payload | `⌈bits/8⌉` bytes, MSB-first |

use crate::codecs::{CodecModel, SearchStrategy, SymbolCodec};
use crate::corpus::SymbolSequence;
use crate::varint::{self, Cursor};
use crate::{Error, Result};

pub const MAGIC: &[u8; 4] = b"PFXC";
pub const VERSION: u8 = 1;

const FLAG_FALLBACK: u8 = 1;
const FLAG_BINARY: u8 = 2;
const FLAG_REMAP: u8 = 4;

/// A parsed container.
#[derive(Debug, Clone)]
pub struct Container {
    pub model: CodecModel,
    pub sequence: SymbolSequence,
    pub payload_bits: u64,
}

/// Encodes `seq` with `model` and serializes everything needed to restore
/// the raw stream.
pub fn compress(seq: &SymbolSequence, model: &CodecModel) -> Result<Vec<u8>> {
    if model.alphabet_size() != seq.alphabet_size() {
        return Err(Error::InvalidParameter(format!(
            "model alphabet {} differs from sequence alphabet {}",
            model.alphabet_size(),
            seq.alphabet_size()
        )));
    }
    let (payload, bits) = model.encode_all(seq.symbols())?;
    let mut out = Vec::with_capacity(payload.len() + 64);
    out.extend_from_slice(MAGIC);
    out.push(VERSION);
    out.push(model.scheme_id());
    let mut flags = 0;
    if model.is_fallback() {
        flags |= FLAG_FALLBACK;
    }
    if model.search() == SearchStrategy::Binary {
        flags |= FLAG_BINARY;
    }
    if seq.remap().is_some() {
        flags |= FLAG_REMAP;
    }
    out.push(flags);
    varint::put(&mut out, seq.alphabet_size() as u64);
    varint::put(&mut out, seq.len() as u64);
    if let Some(remap) = seq.remap() {
        let mut prev = 0i64;
        for &v in remap {
            varint::put_signed(&mut out, v as i64 - prev);
            prev = v as i64;
        }
    }
    model.write_model(&mut out);
    varint::put(&mut out, bits);
    out.extend_from_slice(&payload);
    Ok(out)
}

/// Parses and decodes a container.
pub fn read(bytes: &[u8]) -> Result<Container> {
    let mut cur = Cursor::new(bytes);
    if cur.bytes(4).ok() != Some(&MAGIC[..]) {
        return Err(Error::Format("missing PFXC magic".into()));
    }
    let version = cur.byte()?;
    if version != VERSION {
        return Err(Error::Format(format!("unsupported version {version}")));
    }
    let scheme = cur.byte()?;
    let flags = cur.byte()?;
    if flags & !(FLAG_FALLBACK | FLAG_BINARY | FLAG_REMAP) != 0 {
        return Err(Error::Format(format!("unknown flags {flags:#04x}")));
    }
    let n = cur.get_usize("alphabet size", u32::MAX as usize)?;
    let len = cur.get_usize("sequence length", (crate::corpus::MAX_TOTAL - 1) as usize)?;
    if n == 0 || len == 0 {
        return Err(Error::Format("empty alphabet or sequence".into()));
    }
    let remap = if flags & FLAG_REMAP != 0 {
        let mut m = Vec::with_capacity(n.min(1 << 20));
        let mut prev = 0i64;
        for _ in 0..n {
            prev += cur.get_signed()?;
            let v = u32::try_from(prev).map_err(|_| Error::Format("remap value out of range".into()))?;
            m.push(v);
        }
        Some(m)
    } else {
        None
    };
    let search = if flags & FLAG_BINARY != 0 {
        SearchStrategy::Binary
    } else {
        SearchStrategy::Sequential
    };
    let (model, used) = CodecModel::read_model(scheme, flags & FLAG_FALLBACK != 0, search, cur.rest())?;
    cur.bytes(used)?;
    if model.alphabet_size() != n {
        return Err(Error::Format("model alphabet disagrees with header".into()));
    }
    let bits = cur.get()?;
    let payload = cur.rest();
    if bits.div_ceil(8) != payload.len() as u64 {
        return Err(Error::Format(format!(
            "payload holds {} bytes, header announces {bits} bits",
            payload.len()
        )));
    }
    let symbols = model.decode_all(payload, bits, len)?;
    Ok(Container {
        model,
        sequence: SymbolSequence::from_parts(symbols, n, remap),
        payload_bits: bits,
    })
}

/// Decodes a container back to the raw values.
pub fn decompress(bytes: &[u8]) -> Result<Vec<u32>> {
    Ok(read(bytes)?.sequence.to_raw())
}
