//! The LFAM on-disk format for layer families.
//!
//! Layout: 8-byte magic "LFAMv001", n (u32 LE), k (u32 LE), then
//! ceil(C(n,k)/8) payload bytes holding the membership bit vector in colex
//! rank order, least-significant bit first within each byte. A sidecar JSON
//! manifest (`<path>.json`) records n, k, popcount and an FNV-1a 64
//! checksum of the payload.

use crate::binom::binom;
use crate::error::{Error, Result};
use crate::family::LayerFamily;
use serde::{Deserialize, Serialize};
use std::fs;
use std::io::{Read, Write};
use std::path::{Path, PathBuf};

pub const MAGIC: &[u8; 8] = b"LFAMv001";

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq, Eq)]
pub struct Manifest {
    pub n: u32,
    pub k: u32,
    pub popcount: u64,
    pub fnv1a64: String,
}

/// FNV-1a, 64-bit.
pub fn fnv1a64(data: &[u8]) -> u64 {
    let mut h: u64 = 0xcbf29ce484222325;
    for &b in data {
        h ^= b as u64;
        h = h.wrapping_mul(0x100000001b3);
    }
    h
}

fn payload_bytes(f: &LayerFamily) -> Vec<u8> {
    let nbytes = ((f.layer_size() + 7) / 8) as usize;
    let mut out = Vec::with_capacity(nbytes);
    for w in f.words() {
        out.extend_from_slice(&w.to_le_bytes());
    }
    out.truncate(nbytes);
    // a short final word still needs emitting
    while out.len() < nbytes {
        out.push(0);
    }
    out
}

pub fn manifest_path(path: &Path) -> PathBuf {
    let mut os = path.as_os_str().to_owned();
    os.push(".json");
    PathBuf::from(os)
}

/// Write a family plus its sidecar manifest.
pub fn write_family(f: &LayerFamily, path: &Path) -> Result<Manifest> {
    let payload = payload_bytes(f);
    let mut file = fs::File::create(path)?;
    file.write_all(MAGIC)?;
    file.write_all(&f.n().to_le_bytes())?;
    file.write_all(&f.k().to_le_bytes())?;
    file.write_all(&payload)?;
    let manifest = Manifest {
        n: f.n(),
        k: f.k(),
        popcount: f.popcount(),
        fnv1a64: format!("{:016x}", fnv1a64(&payload)),
    };
    fs::write(
        manifest_path(path),
        serde_json::to_string_pretty(&manifest).expect("manifest serialization"),
    )?;
    Ok(manifest)
}

/// Read a family, validating the magic, length, padding bits and, when the
/// sidecar manifest exists, the popcount and checksum.
pub fn read_family(path: &Path) -> Result<LayerFamily> {
    let mut file = fs::File::open(path)?;
    let mut header = [0u8; 16];
    file.read_exact(&mut header)
        .map_err(|_| Error::Format("file shorter than the LFAM header".into()))?;
    if &header[..8] != MAGIC {
        return Err(Error::Format("bad magic; not an LFAM file".into()));
    }
    let n = u32::from_le_bytes(header[8..12].try_into().unwrap());
    let k = u32::from_le_bytes(header[12..16].try_into().unwrap());
    let mut f = LayerFamily::empty(n, k)?;
    let size = binom(n, k);
    let nbytes = ((size + 7) / 8) as usize;
    let mut payload = vec![0u8; nbytes];
    file.read_exact(&mut payload)
        .map_err(|_| Error::Format("payload shorter than C(n,k) bits".into()))?;
    let mut trailing = [0u8; 1];
    if file.read(&mut trailing)? != 0 {
        return Err(Error::Format("trailing bytes after payload".into()));
    }
    for (byte_idx, &b) in payload.iter().enumerate() {
        for bit in 0..8 {
            if b >> bit & 1 == 1 {
                let rank = byte_idx as u64 * 8 + bit as u64;
                if rank >= size {
                    return Err(Error::Format("padding bits beyond C(n,k) are set".into()));
                }
                f.insert_rank(rank);
            }
        }
    }
    let mpath = manifest_path(path);
    if mpath.exists() {
        let manifest: Manifest = serde_json::from_str(&fs::read_to_string(&mpath)?)
            .map_err(|e| Error::Format(format!("bad manifest: {e}")))?;
        if manifest.n != n || manifest.k != k {
            return Err(Error::Format("manifest layer coordinates disagree".into()));
        }
        if manifest.popcount != f.popcount() {
            return Err(Error::Format("manifest popcount disagrees with payload".into()));
        }
        let sum = format!("{:016x}", fnv1a64(&payload));
        if manifest.fnv1a64 != sum {
            return Err(Error::Format("manifest checksum disagrees with payload".into()));
        }
    }
    Ok(f)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha12Rng;
    use tempfile::tempdir;

    #[test]
    fn fnv_reference_vectors() {
        // Standard FNV-1a test vectors.
        assert_eq!(fnv1a64(b""), 0xcbf29ce484222325);
        assert_eq!(fnv1a64(b"a"), 0xaf63dc4c8601ec8c);
        assert_eq!(fnv1a64(b"foobar"), 0x85944171f73967e8);
    }

    #[test]
    fn roundtrip_random_families() {
        let dir = tempdir().unwrap();
        let mut rng = ChaCha12Rng::seed_from_u64(5);
        for i in 0..10 {
            let n = rng.gen_range(1..=12u32);
            let k = rng.gen_range(0..=n);
            let mut f = LayerFamily::empty(n, k).unwrap();
            for r in 0..f.layer_size() {
                if rng.gen::<f64>() < 0.4 {
                    f.insert_rank(r);
                }
            }
            let path = dir.path().join(format!("fam{i}.lfam"));
            let manifest = write_family(&f, &path).unwrap();
            assert_eq!(manifest.popcount, f.popcount());
            let g = read_family(&path).unwrap();
            assert_eq!(f, g);
        }
    }

    #[test]
    fn header_layout_is_fixed() {
        let dir = tempdir().unwrap();
        let f = LayerFamily::from_members(4, 2, [0b0011u64, 0b1100]).unwrap();
        let path = dir.path().join("f.lfam");
        write_family(&f, &path).unwrap();
        let bytes = fs::read(&path).unwrap();
        assert_eq!(&bytes[..8], b"LFAMv001");
        assert_eq!(u32::from_le_bytes(bytes[8..12].try_into().unwrap()), 4);
        assert_eq!(u32::from_le_bytes(bytes[12..16].try_into().unwrap()), 2);
        // C(4,2) = 6 bits -> one byte; members at colex ranks 0 and 5.
        assert_eq!(bytes.len(), 17);
        assert_eq!(bytes[16], 0b10_0001);
    }

    #[test]
    fn corruption_is_detected() {
        let dir = tempdir().unwrap();
        let f = LayerFamily::from_members(6, 3, [0b000111u64]).unwrap();
        let path = dir.path().join("f.lfam");
        write_family(&f, &path).unwrap();
        let mut bytes = fs::read(&path).unwrap();
        bytes[16] ^= 0x02; // flip a membership bit
        fs::write(&path, &bytes).unwrap();
        assert!(matches!(read_family(&path), Err(Error::Format(_))));
    }

    #[test]
    fn bad_magic_rejected() {
        let dir = tempdir().unwrap();
        let path = dir.path().join("junk");
        fs::write(&path, b"NOTLFAM0aaaaaaaaaaaa").unwrap();
        assert!(matches!(read_family(&path), Err(Error::Format(_))));
    }
}
