//! The 16-byte file header shared by every key and signature file.
//!
//! ```text
//! 0..4   magic "CVK1"
//! 4      scheme   0 = Rabin-Williams, 1 = Squirrels, 2 = Wave
//! 5      kind     0 = PK, 1 = CK, 2 = VK, 3 = SIG, 4 = SK
//! 6..8   instance tag, little-endian (0 for toy parameters)
//! 8..16  payload length, little-endian
//! ```

use std::fs;
use std::io::Write;
use std::path::Path;

use thiserror::Error;

pub const MAGIC: [u8; 4] = *b"CVK1";
pub const HEADER_LEN: usize = 16;

#[derive(Debug, Error)]
pub enum FormatError {
    #[error("{0}")]
    Io(#[from] std::io::Error),
    #[error("not a compverify file")]
    BadMagic,
    #[error("file shorter than its header")]
    Truncated,
    #[error("unknown scheme byte {0}")]
    UnknownScheme(u8),
    #[error("unknown kind byte {0}")]
    UnknownKind(u8),
    #[error("header declares {declared} payload bytes, file has {actual}")]
    LengthMismatch { declared: u64, actual: u64 },
    #[error("expected {expected}, found {found}")]
    Unexpected { expected: String, found: String },
    #[error("malformed payload: {0}")]
    Payload(&'static str),
    #[error(transparent)]
    Core(#[from] compverify_core::Error),
}

pub type Result<T> = std::result::Result<T, FormatError>;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Scheme {
    Rw = 0,
    Squirrels = 1,
    Wave = 2,
}

impl Scheme {
    pub fn from_byte(b: u8) -> Result<Self> {
        match b {
            0 => Ok(Scheme::Rw),
            1 => Ok(Scheme::Squirrels),
            2 => Ok(Scheme::Wave),
            _ => Err(FormatError::UnknownScheme(b)),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Scheme::Rw => "rw",
            Scheme::Squirrels => "squirrels",
            Scheme::Wave => "wave",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Kind {
    Pk = 0,
    Ck = 1,
    Vk = 2,
    Sig = 3,
    Sk = 4,
}

impl Kind {
    pub fn from_byte(b: u8) -> Result<Self> {
        match b {
            0 => Ok(Kind::Pk),
            1 => Ok(Kind::Ck),
            2 => Ok(Kind::Vk),
            3 => Ok(Kind::Sig),
            4 => Ok(Kind::Sk),
            _ => Err(FormatError::UnknownKind(b)),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Kind::Pk => "public key",
            Kind::Ck => "compression key",
            Kind::Vk => "verification key",
            Kind::Sig => "signature",
            Kind::Sk => "signing key",
        }
    }

    /// Compression, verification and signing keys are verifier- or
    /// signer-private and are written owner-only.
    pub fn is_private(self) -> bool {
        matches!(self, Kind::Ck | Kind::Vk | Kind::Sk)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Header {
    pub scheme: Scheme,
    pub kind: Kind,
    pub instance: u16,
    pub payload_len: u64,
}

impl Header {
    pub fn to_bytes(&self) -> [u8; HEADER_LEN] {
        let mut out = [0u8; HEADER_LEN];
        out[..4].copy_from_slice(&MAGIC);
        out[4] = self.scheme as u8;
        out[5] = self.kind as u8;
        out[6..8].copy_from_slice(&self.instance.to_le_bytes());
        out[8..].copy_from_slice(&self.payload_len.to_le_bytes());
        out
    }

    pub fn parse(bytes: &[u8]) -> Result<Self> {
        if bytes.len() < HEADER_LEN {
            return Err(FormatError::Truncated);
        }
        if bytes[..4] != MAGIC {
            return Err(FormatError::BadMagic);
        }
        Ok(Self {
            scheme: Scheme::from_byte(bytes[4])?,
            kind: Kind::from_byte(bytes[5])?,
            instance: u16::from_le_bytes([bytes[6], bytes[7]]),
            payload_len: u64::from_le_bytes(bytes[8..16].try_into().expect("8 bytes")),
        })
    }
}

/// Header followed by payload.
pub fn seal(scheme: Scheme, kind: Kind, instance: u16, payload: &[u8]) -> Vec<u8> {
    let header = Header { scheme, kind, instance, payload_len: payload.len() as u64 };
    let mut out = Vec::with_capacity(HEADER_LEN + payload.len());
    out.extend_from_slice(&header.to_bytes());
    out.extend_from_slice(payload);
    out
}

/// Splits a file into header and payload, insisting the declared length is exact.
pub fn open(bytes: &[u8]) -> Result<(Header, &[u8])> {
    let header = Header::parse(bytes)?;
    let actual = (bytes.len() - HEADER_LEN) as u64;
    if actual != header.payload_len {
        return Err(FormatError::LengthMismatch { declared: header.payload_len, actual });
    }
    Ok((header, &bytes[HEADER_LEN..]))
}

/// Writes a file, owner read/write only when `private`.
pub fn write_file(path: &Path, bytes: &[u8], private: bool) -> Result<()> {
    let mut options = fs::OpenOptions::new();
    options.write(true).create(true).truncate(true);
    #[cfg(unix)]
    {
        use std::os::unix::fs::{OpenOptionsExt, PermissionsExt};
        if private {
            options.mode(0o600);
        }
        let mut file = options.open(path)?;
        if private {
            // `mode` only applies to newly created files.
            file.set_permissions(fs::Permissions::from_mode(0o600))?;
        }
        file.write_all(bytes)?;
    }
    #[cfg(not(unix))]
    {
        let _ = private;
        options.open(path)?.write_all(bytes)?;
    }
    Ok(())
}

/// Little-endian field reader over a payload.
pub struct Reader<'a> {
    bytes: &'a [u8],
}

impl<'a> Reader<'a> {
    pub fn new(bytes: &'a [u8]) -> Self {
        Self { bytes }
    }

    pub fn take(&mut self, n: usize) -> Result<&'a [u8]> {
        if self.bytes.len() < n {
            return Err(FormatError::Payload("payload ends early"));
        }
        let (head, rest) = self.bytes.split_at(n);
        self.bytes = rest;
        Ok(head)
    }

    pub fn u8(&mut self) -> Result<u8> {
        Ok(self.take(1)?[0])
    }

    pub fn u32(&mut self) -> Result<u32> {
        Ok(u32::from_le_bytes(self.take(4)?.try_into().expect("4 bytes")))
    }

    pub fn u64(&mut self) -> Result<u64> {
        Ok(u64::from_le_bytes(self.take(8)?.try_into().expect("8 bytes")))
    }

    pub fn i64(&mut self) -> Result<i64> {
        Ok(i64::from_le_bytes(self.take(8)?.try_into().expect("8 bytes")))
    }

    /// A residue stored as a non-negative signed 32-bit field.
    pub fn residue(&mut self) -> Result<u64> {
        let v = i32::from_le_bytes(self.take(4)?.try_into().expect("4 bytes"));
        u64::try_from(v).map_err(|_| FormatError::Payload("negative residue"))
    }

    pub fn remaining(&self) -> usize {
        self.bytes.len()
    }

    pub fn rest(&mut self) -> &'a [u8] {
        std::mem::take(&mut self.bytes)
    }

    pub fn finish(&self) -> Result<()> {
        if self.bytes.is_empty() {
            Ok(())
        } else {
            Err(FormatError::Payload("trailing bytes"))
        }
    }
}

/// Appends a residue below 2^31 as a signed 32-bit field.
pub fn put_residue(out: &mut Vec<u8>, v: u64) {
    let v = i32::try_from(v).expect("residues are below 2^31");
    out.extend_from_slice(&v.to_le_bytes());
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn header_round_trip() {
        let h = Header { scheme: Scheme::Wave, kind: Kind::Vk, instance: 822, payload_len: 169_920 };
        assert_eq!(Header::parse(&h.to_bytes()).unwrap(), h);
    }

    #[test]
    fn open_checks_length_and_magic() {
        let file = seal(Scheme::Rw, Kind::Ck, 128, &[1, 2, 3]);
        let (h, payload) = open(&file).unwrap();
        assert_eq!((h.kind, payload), (Kind::Ck, &[1u8, 2, 3][..]));
        assert!(matches!(open(&file[..file.len() - 1]), Err(FormatError::LengthMismatch { .. })));
        assert!(matches!(open(&file[..10]), Err(FormatError::Truncated)));
        let mut bad = file.clone();
        bad[0] = b'X';
        assert!(matches!(open(&bad), Err(FormatError::BadMagic)));
        bad = file.clone();
        bad[5] = 9;
        assert!(matches!(open(&bad), Err(FormatError::UnknownKind(9))));
    }

    #[test]
    fn negative_residue_rejected() {
        let mut r = Reader::new(&[0xff, 0xff, 0xff, 0xff]);
        assert!(r.residue().is_err());
    }
}
