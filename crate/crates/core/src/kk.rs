//! Lexicographic initial segments, closure of the segment class under
//! upper shadows, and the minimum iterated-shadow measure obtained by
//! materializing and shadowing the extremal segment.

use crate::binom::binom;
use crate::error::{Error, Result};
use crate::family::LayerFamily;
use crate::mask::{lex_next, lex_rank, mask_of_elements};
use num::{BigInt, BigRational, ToPrimitive};

/// The `size` lex-smallest k-element subsets of {1,..,n}, in layer-family
/// (colex bit vector) representation.
pub fn lex_segment(n: u32, k: u32, size: u64) -> Result<LayerFamily> {
    if k > n {
        return Err(Error::input(format!("k = {k} > n = {n}")));
    }
    if size > binom(n, k) {
        return Err(Error::input(format!(
            "segment size {size} exceeds C({n},{k}) = {}",
            binom(n, k)
        )));
    }
    let mut f = LayerFamily::empty(n, k)?;
    if size == 0 {
        return Ok(f);
    }
    if k == 0 {
        f.insert_rank(0);
        return Ok(f);
    }
    let mut elems: Vec<u32> = (1..=k).collect();
    for i in 0..size {
        f.insert_mask(mask_of_elements(&elems));
        if i + 1 < size {
            let ok = lex_next(&mut elems, n);
            debug_assert!(ok);
        }
    }
    Ok(f)
}

#[derive(Debug, Clone)]
pub struct ClosureCheck {
    pub is_lex_segment: bool,
    pub segment_measure: BigRational,
    pub shadow_measure: BigRational,
    pub shadow_size: u64,
}

/// Whether the r-iterated upper shadow of the given lex segment is itself a
/// lex initial segment of layer k+r, together with both measures.
pub fn shadow_closure_check(n: u32, k: u32, size: u64, r: u32) -> Result<ClosureCheck> {
    if k + r > n {
        return Err(Error::LayerOverflow(format!("k + r = {} > n = {n}", k + r)));
    }
    let seg = lex_segment(n, k, size)?;
    let shadow = seg.iterated_upper_shadow(r)?;
    let shadow_size = shadow.popcount();
    let reference = lex_segment(n, k + r, shadow_size)?;
    Ok(ClosureCheck {
        is_lex_segment: shadow == reference,
        segment_measure: seg.measure(),
        shadow_measure: shadow.measure(),
        shadow_size,
    })
}

/// Incremental sweep over every segment size at once: grows the segment one
/// set at a time, maintains its r-iterated shadow, and confirms after every
/// step that the shadow occupies a lex prefix of the target layer.
///
/// Returns the first violating size, or None when the closure property
/// holds for all sizes.
pub fn closure_violation_over_sizes(n: u32, k: u32, r: u32) -> Result<Option<u64>> {
    if k + r > n {
        return Err(Error::LayerOverflow(format!("k + r = {} > n = {n}", k + r)));
    }
    if r == 0 || k == 0 {
        return Ok(None);
    }
    let full = crate::mask::low_mask(n);
    let mut shadow = LayerFamily::empty(n, k + r)?;
    let mut count = 0u64;
    let mut max_lex: i128 = -1;
    let mut elems: Vec<u32> = (1..=k).collect();
    let total = binom(n, k);
    for size in 1..=total {
        let m = mask_of_elements(&elems);
        let outside = full & !m;
        crate::family::for_each_subset_of_size(outside, r, |extra| {
            let sup = m | extra;
            if !shadow.contains_mask(sup) {
                shadow.insert_mask(sup);
                count += 1;
                let lr = lex_rank(sup, n, k + r) as i128;
                if lr > max_lex {
                    max_lex = lr;
                }
            }
        });
        if max_lex != count as i128 - 1 {
            return Ok(Some(size));
        }
        if size < total {
            lex_next(&mut elems, n);
        }
    }
    Ok(None)
}

#[derive(Debug, Clone)]
pub struct IteratedBound {
    pub n: u32,
    pub r: u32,
    pub requested_measure: BigRational,
    /// Measure actually realized after rounding the segment size down.
    pub effective_measure: BigRational,
    pub segment_size: u64,
    /// Minimum possible measure of the r-iterated upper shadow over
    /// middle-layer families of the effective measure.
    pub bound: BigRational,
}

/// Minimum iterated-shadow measure at the middle layer, by construction:
/// materialize the lex segment of the nearest achievable size not above the
/// requested measure and shadow it.
pub fn kk_iterated_lower_bound(n: u32, measure: &BigRational, r: u32) -> Result<IteratedBound> {
    if n == 0 || n % 2 != 0 {
        return Err(Error::input(format!("n = {n} must be positive and even")));
    }
    if r > n / 2 {
        return Err(Error::LayerOverflow(format!("r = {r} > n/2")));
    }
    let zero = BigRational::new(BigInt::from(0), BigInt::from(1));
    let one = BigRational::new(BigInt::from(1), BigInt::from(1));
    if measure < &zero || measure > &one {
        return Err(Error::input("measure outside [0, 1]"));
    }
    let k = n / 2;
    let layer = binom(n, k);
    let size = (measure * BigRational::new(BigInt::from(layer), BigInt::from(1)))
        .floor()
        .to_integer()
        .to_u64()
        .ok_or_else(|| Error::input("measure does not scale to a segment size"))?;
    let seg = lex_segment(n, k, size)?;
    let bound = seg.iterated_upper_shadow(r)?.measure();
    Ok(IteratedBound {
        n,
        r,
        requested_measure: measure.clone(),
        effective_measure: seg.measure(),
        segment_size: size,
        bound,
    })
}
