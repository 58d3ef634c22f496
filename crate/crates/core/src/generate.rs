//! Named family generators and the `--family` string syntax.

use crate::error::{Error, Result};
use crate::family::{LayerFamily, Predicate};
use crate::kk::lex_segment;
use crate::lfam::read_family;
use crate::mask::{low_mask, mask_of_elements};

fn witness_mask(t: &[u32], n: u32) -> Result<u64> {
    if t.is_empty() {
        return Err(Error::input("weight family needs a nonempty witness set"));
    }
    for &e in t {
        if e == 0 || e > n {
            return Err(Error::input(format!("element {e} outside [1, {n}]")));
        }
    }
    Ok(mask_of_elements(t))
}
use crate::mc::subrng;
use rand::Rng;
use std::path::PathBuf;

/// A family on the middle layer, named by construction.
#[derive(Debug, Clone, PartialEq)]
pub enum FamilySpec {
    /// {A : 1 ∈ A}.
    Dictator,
    /// {A : |A ∩ [n/2]| > n/4}; needs n ≡ 2 (mod 4).
    HalfHalf,
    /// First `size` sets in lexicographic order.
    LexSegment(u64),
    /// Each middle-layer set kept independently with probability p.
    Random { p: f64 },
    /// {A : |A ∩ T| >= threshold} for a fixed witness set T (1-based
    /// elements).
    Weight { t: Vec<u32>, threshold: u32 },
    /// Load from an LFAM file.
    File(PathBuf),
}

impl FamilySpec {
    /// Parse the `--family` syntax:
    /// `dictator`, `half-half`, `lex:SIZE`, `random:P`,
    /// `weight:E1,E2,..:THRESHOLD`, `file:PATH`.
    pub fn parse(s: &str) -> Result<FamilySpec> {
        match s {
            "dictator" => return Ok(FamilySpec::Dictator),
            "half-half" => return Ok(FamilySpec::HalfHalf),
            _ => {}
        }
        let (kind, rest) = s
            .split_once(':')
            .ok_or_else(|| Error::input(format!("unknown family spec '{s}'")))?;
        match kind {
            "lex" => {
                let size: u64 = rest
                    .parse()
                    .map_err(|_| Error::input(format!("bad lex segment size '{rest}'")))?;
                Ok(FamilySpec::LexSegment(size))
            }
            "random" => {
                let p: f64 = rest
                    .parse()
                    .map_err(|_| Error::input(format!("bad probability '{rest}'")))?;
                if !(0.0..=1.0).contains(&p) {
                    return Err(Error::input(format!("probability {p} outside [0, 1]")));
                }
                Ok(FamilySpec::Random { p })
            }
            "weight" => {
                let (elems, thr) = rest
                    .rsplit_once(':')
                    .ok_or_else(|| Error::input("weight spec needs weight:E1,E2,..:THRESHOLD"))?;
                let t: Vec<u32> = elems
                    .split(',')
                    .map(|e| {
                        e.trim()
                            .parse()
                            .map_err(|_| Error::input(format!("bad element '{e}'")))
                    })
                    .collect::<Result<_>>()?;
                let threshold: u32 = thr
                    .parse()
                    .map_err(|_| Error::input(format!("bad threshold '{thr}'")))?;
                Ok(FamilySpec::Weight { t, threshold })
            }
            "file" => Ok(FamilySpec::File(PathBuf::from(rest))),
            _ => Err(Error::input(format!("unknown family kind '{kind}'"))),
        }
    }

    /// Short name for report rows.
    pub fn label(&self) -> String {
        match self {
            FamilySpec::Dictator => "dictator".into(),
            FamilySpec::HalfHalf => "half-half".into(),
            FamilySpec::LexSegment(size) => format!("lex:{size}"),
            FamilySpec::Random { p } => format!("random:{p}"),
            FamilySpec::Weight { t, threshold } => {
                let elems: Vec<String> = t.iter().map(|e| e.to_string()).collect();
                format!("weight:{}:{threshold}", elems.join(","))
            }
            FamilySpec::File(path) => format!("file:{}", path.display()),
        }
    }

    fn half_half_params(n: u32) -> Result<(u64, u32)> {
        if n % 4 != 2 {
            return Err(Error::input(format!(
                "half-half family needs n ≡ 2 (mod 4), got n = {n}"
            )));
        }
        // |A ∩ [n/2]| > n/4  <=>  |A ∩ [n/2]| >= (n + 2) / 4
        Ok((low_mask(n / 2), (n + 2) / 4))
    }

    /// Materialize the family on the middle layer of [n].
    pub fn generate(&self, n: u32, seed: u64) -> Result<LayerFamily> {
        if n == 0 || n % 2 != 0 {
            return Err(Error::input(format!("n = {n} must be positive and even")));
        }
        let k = n / 2;
        match self {
            FamilySpec::Dictator => {
                let mut out = LayerFamily::empty(n, k)?;
                let full = LayerFamily::full(n, k)?;
                full.for_each_member(|rank, mask| {
                    if mask & 1 == 1 {
                        out.insert_rank(rank);
                    }
                });
                Ok(out)
            }
            FamilySpec::HalfHalf => {
                let (t, thr) = Self::half_half_params(n)?;
                let mut out = LayerFamily::empty(n, k)?;
                let full = LayerFamily::full(n, k)?;
                full.for_each_member(|rank, mask| {
                    if (mask & t).count_ones() >= thr {
                        out.insert_rank(rank);
                    }
                });
                Ok(out)
            }
            FamilySpec::LexSegment(size) => lex_segment(n, k, *size),
            FamilySpec::Random { p } => {
                let mut rng = subrng(seed, 0);
                let mut out = LayerFamily::empty(n, k)?;
                for rank in 0..out.layer_size() {
                    if rng.gen::<f64>() < *p {
                        out.insert_rank(rank);
                    }
                }
                Ok(out)
            }
            FamilySpec::Weight { t, threshold } => {
                let tmask = witness_mask(t, n)?;
                let mut out = LayerFamily::empty(n, k)?;
                let full = LayerFamily::full(n, k)?;
                full.for_each_member(|rank, mask| {
                    if (mask & tmask).count_ones() >= *threshold {
                        out.insert_rank(rank);
                    }
                });
                Ok(out)
            }
            FamilySpec::File(path) => {
                let f = read_family(path)?;
                if f.n() != n {
                    return Err(Error::input(format!(
                        "file family has n = {} but --n = {n}",
                        f.n()
                    )));
                }
                Ok(f)
            }
        }
    }

    /// Closed-form membership predicate, for families that have one; lets
    /// Monte-Carlo runs work far beyond materialization capacity.
    pub fn predicate(&self, n: u32) -> Result<Option<Predicate>> {
        if n == 0 || n % 2 != 0 {
            return Err(Error::input(format!("n = {n} must be positive and even")));
        }
        let k = n / 2;
        match self {
            FamilySpec::Dictator => Ok(Some(Predicate::WeightAtLeast { t: 1, k, a: 1 })),
            FamilySpec::HalfHalf => {
                let (t, thr) = Self::half_half_params(n)?;
                Ok(Some(Predicate::WeightAtLeast { t, k, a: thr }))
            }
            FamilySpec::Weight { t, threshold } => {
                let tmask = witness_mask(t, n)?;
                Ok(Some(Predicate::WeightAtLeast {
                    t: tmask,
                    k,
                    a: *threshold,
                }))
            }
            _ => Ok(None),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num::ToPrimitive;

    #[test]
    fn parse_round_trips() {
        for s in [
            "dictator",
            "half-half",
            "lex:17",
            "random:0.3",
            "weight:1,2,3:2",
            "file:/tmp/x.lfam",
        ] {
            let spec = FamilySpec::parse(s).unwrap();
            assert_eq!(spec.label(), s);
        }
        assert!(FamilySpec::parse("bogus").is_err());
        assert!(FamilySpec::parse("random:1.5").is_err());
        assert!(FamilySpec::parse("lex:x").is_err());
    }

    #[test]
    fn dictator_measure_half() {
        // n = 6: C(5,2)/C(6,3) = 10/20 = 1/2
        let f = FamilySpec::Dictator.generate(6, 0).unwrap();
        assert_eq!(f.popcount(), 10);
        assert_eq!(f.measure().to_f64().unwrap(), 0.5);
        // agrees with the predicate everywhere
        let p = FamilySpec::Dictator.predicate(6).unwrap().unwrap();
        f.complement().for_each_member(|_, m| assert!(!p.contains(m)));
        f.for_each_member(|_, m| assert!(p.contains(m)));
    }

    #[test]
    fn half_half_count_at_six() {
        // 3-sets of [6] with at least two of {1,2,3}: 3*3 + 1 = 10 of 20.
        let f = FamilySpec::HalfHalf.generate(6, 0).unwrap();
        assert_eq!(f.popcount(), 10);
        assert_eq!(f.measure_f64(), 0.5);
        assert!(FamilySpec::HalfHalf.generate(8, 0).is_err());
        let p = FamilySpec::HalfHalf.predicate(6).unwrap().unwrap();
        f.for_each_member(|_, m| assert!(p.contains(m)));
        f.complement().for_each_member(|_, m| assert!(!p.contains(m)));
    }

    #[test]
    fn random_measure_concentrates() {
        let n = 16u32;
        let p = 0.3;
        let f = FamilySpec::Random { p }.generate(n, 5).unwrap();
        let total = f.layer_size() as f64;
        let sigma = (p * (1.0 - p) / total).sqrt();
        assert!((f.measure_f64() - p).abs() < 3.0 * sigma);
        // seeded: regeneration is identical
        let g = FamilySpec::Random { p }.generate(n, 5).unwrap();
        assert_eq!(f.words(), g.words());
        let h = FamilySpec::Random { p }.generate(n, 6).unwrap();
        assert_ne!(f.words(), h.words());
    }

    #[test]
    fn weight_generalizes_dictator() {
        let d = FamilySpec::Dictator.generate(10, 0).unwrap();
        let w = FamilySpec::Weight {
            t: vec![1],
            threshold: 1,
        }
        .generate(10, 0)
        .unwrap();
        assert_eq!(d.words(), w.words());
    }

    #[test]
    fn lex_segment_size() {
        let f = FamilySpec::LexSegment(7).generate(8, 0).unwrap();
        assert_eq!(f.popcount(), 7);
    }

    #[test]
    fn file_round_trip() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("f.lfam");
        let f = FamilySpec::HalfHalf.generate(10, 0).unwrap();
        crate::lfam::write_family(&f, &path).unwrap();
        let spec = FamilySpec::File(path);
        let g = spec.generate(10, 0).unwrap();
        assert_eq!(f.words(), g.words());
        assert!(spec.generate(12, 0).is_err());
    }
}
