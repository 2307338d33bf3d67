//! Unsigned LEB128 helpers over in-memory buffers.

use crate::{Error, Result};

pub(crate) fn put(out: &mut Vec<u8>, value: u64) {
    leb128::write::unsigned(out, value).expect("writing to a Vec cannot fail");
}

pub(crate) fn put_signed(out: &mut Vec<u8>, value: i64) {
    leb128::write::signed(out, value).expect("writing to a Vec cannot fail");
}

/// Sequential reader over a model or container byte buffer.
pub(crate) struct Cursor<'a> {
    buf: &'a [u8],
    pos: usize,
}

impl<'a> Cursor<'a> {
    pub(crate) fn new(buf: &'a [u8]) -> Self {
        Cursor { buf, pos: 0 }
    }

    pub(crate) fn position(&self) -> usize {
        self.pos
    }

    pub(crate) fn get(&mut self) -> Result<u64> {
        let mut rest = &self.buf[self.pos..];
        let before = rest.len();
        let value = leb128::read::unsigned(&mut rest)
            .map_err(|e| Error::Format(format!("bad varint at byte {}: {e}", self.pos)))?;
        self.pos += before - rest.len();
        Ok(value)
    }

    pub(crate) fn get_signed(&mut self) -> Result<i64> {
        let mut rest = &self.buf[self.pos..];
        let before = rest.len();
        let value = leb128::read::signed(&mut rest)
            .map_err(|e| Error::Format(format!("bad varint at byte {}: {e}", self.pos)))?;
        self.pos += before - rest.len();
        Ok(value)
    }

    pub(crate) fn get_usize(&mut self, what: &str, max: usize) -> Result<usize> {
        let v = self.get()?;
        if v > max as u64 {
            return Err(Error::Format(format!("{what} = {v} exceeds {max}")));
        }
        Ok(v as usize)
    }

    pub(crate) fn byte(&mut self) -> Result<u8> {
        let b = *self
            .buf
            .get(self.pos)
            .ok_or_else(|| Error::Format(format!("unexpected end at byte {}", self.pos)))?;
        self.pos += 1;
        Ok(b)
    }

    pub(crate) fn bytes(&mut self, len: usize) -> Result<&'a [u8]> {
        if self.buf.len() - self.pos < len {
            return Err(Error::Format(format!(
                "need {len} bytes at offset {}, only {} left",
                self.pos,
                self.buf.len() - self.pos
            )));
        }
        let s = &self.buf[self.pos..self.pos + len];
        self.pos += len;
        Ok(s)
    }

    pub(crate) fn rest(&self) -> &'a [u8] {
        &self.buf[self.pos..]
    }
}
