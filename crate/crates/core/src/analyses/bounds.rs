//! Exact evaluation of the length bounds for witness pseudo-runs.

use std::cmp::Ordering;

use num_bigint::{BigInt, BigUint};
use num_traits::{One, ToPrimitive, Zero};
use thiserror::Error;

use crate::model::{Configuration, Vass};
use crate::reductions::vass_to_vas_hp;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum BoundsError {
    #[error("value has about 2^{log2_bits:.1} bits and cannot be materialized")]
    TooLarge { log2_bits: f64 },

    #[error("level {level} exceeds the dimension {dim}")]
    LevelOutOfRange { level: usize, dim: usize },
}

/// Largest result, in bits, that [`rackoff_closed_bound`] will materialize.
pub const MAX_MATERIALIZED_BITS: u64 = 1 << 28;

/// Parameters of the bound recurrence.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BoundParams {
    pub n: u32,
    pub k: u32,
    pub absmax_t: BigUint,
    pub absmax_p: BigUint,
    /// Clamped to at least 1 by [`BoundParams::new`].
    pub pic_t: BigUint,
    pub c1: u32,
    pub c: u32,
}

impl BoundParams {
    pub fn new(
        n: u32,
        k: u32,
        absmax_t: BigUint,
        absmax_p: BigUint,
        pic_t: BigUint,
        c1: u32,
        c: u32,
    ) -> Self {
        let one = BigUint::one();
        BoundParams {
            n,
            k,
            absmax_t,
            absmax_p,
            pic_t: if pic_t.is_zero() { one } else { pic_t },
            c1,
            c,
        }
    }

    /// Parameters for a property with `k` rows and scale `scale` on `v`.
    ///
    /// Models with more than one state are measured through the
    /// three-counter encoding into a vector addition system.
    pub fn for_instance(v: &Vass, init: &Configuration, k: usize, scale: &BigInt, c1: u32, c: u32) -> Self {
        let (dim, norms) = if v.is_vas() {
            (v.dim(), v.norms())
        } else {
            let img = vass_to_vas_hp(v, init);
            (img.vas.dim(), img.vas.norms())
        };
        let to_u = |x: &BigInt| x.to_biguint().unwrap_or_default();
        BoundParams::new(
            dim as u32,
            k as u32,
            to_u(&norms.absmax).max(BigUint::one()),
            to_u(scale).max(BigUint::one()),
            to_u(&norms.pic),
            c1,
            c,
        )
    }

    /// `μ = (1 + K)·absmax_T·absmax_P`.
    pub fn mu(&self) -> BigUint {
        BigUint::from(1 + self.k) * &self.absmax_t * &self.absmax_p
    }

    fn inner_exponent(&self) -> u32 {
        self.n.pow(self.c1)
    }
}

/// `g(0) = (2μ)^{n^{C1}}`, `g(i) = (2μ·pic·g(i−1))^{n^{C1}} + g(i−1)`.
pub fn rackoff_g(p: &BoundParams, i: usize) -> Result<BigUint, BoundsError> {
    if i > p.n as usize {
        return Err(BoundsError::LevelOutOfRange {
            level: i,
            dim: p.n as usize,
        });
    }
    Ok(rackoff_g_all(p, i).pop().expect("nonempty"))
}

/// `g(0), …, g(i)`.
pub fn rackoff_g_all(p: &BoundParams, i: usize) -> Vec<BigUint> {
    let two_mu = BigUint::from(2u32) * p.mu();
    let e = p.inner_exponent();
    let mut out = vec![two_mu.pow(e)];
    for _ in 0..i {
        let prev = out.last().expect("nonempty");
        let next = (&two_mu * &p.pic_t * prev).pow(e) + prev;
        out.push(next);
    }
    out
}

/// Base and exponent of `(2μ·pic)^{n^{(2n+1)C}}`.
pub fn closed_bound_parts(p: &BoundParams) -> (BigUint, BigUint) {
    let base = BigUint::from(2u32) * p.mu() * &p.pic_t;
    let exp = BigUint::from(p.n).pow((2 * p.n + 1) * p.c);
    (base, exp)
}

/// `log2` of the closed bound.
pub fn closed_bound_log2(p: &BoundParams) -> f64 {
    let (base, exp) = closed_bound_parts(p);
    log2_biguint(&base) * exp.to_f64().unwrap_or(f64::INFINITY)
}

/// The closed bound `(2μ·pic)^{n^{(2n+1)C}}`, when it is small enough to hold.
pub fn rackoff_closed_bound(p: &BoundParams) -> Result<BigUint, BoundsError> {
    let (base, exp) = closed_bound_parts(p);
    let bits = closed_bound_log2(p);
    if bits > MAX_MATERIALIZED_BITS as f64 {
        return Err(BoundsError::TooLarge {
            log2_bits: bits.log2(),
        });
    }
    let e = exp.to_u32().expect("checked above");
    Ok(base.pow(e))
}

/// Compares `x` with the closed bound without materializing the bound
/// unless the bit-length estimates are inconclusive.
pub fn compare_to_closed_bound(x: &BigUint, p: &BoundParams) -> Ordering {
    let (base, exp) = closed_bound_parts(p);
    if base.is_one() {
        return x.cmp(&BigUint::one());
    }
    // 2^{e·⌊log2 b⌋} ≤ b^e ≤ 2^{e·⌈log2 b⌉}
    let floor_log = BigUint::from(base.bits() - 1);
    let ceil_log = if base.count_ones() == 1 {
        floor_log.clone()
    } else {
        floor_log.clone() + 1u32
    };
    let xbits = BigUint::from(x.bits());
    if xbits <= &exp * &floor_log {
        return Ordering::Less;
    }
    if xbits > &exp * &ceil_log + 1u32 {
        return Ordering::Greater;
    }
    match rackoff_closed_bound(p) {
        Ok(b) => x.cmp(&b),
        Err(_) => log2_biguint(x).partial_cmp(&closed_bound_log2(p)).unwrap_or(Ordering::Less),
    }
}

/// `log2 x`, accurate to double precision for any size.
pub fn log2_biguint(x: &BigUint) -> f64 {
    let bits = x.bits();
    if bits <= 52 {
        return x.to_f64().unwrap_or(0.0).log2();
    }
    let shift = bits - 52;
    let top = (x >> shift).to_f64().unwrap_or(0.0);
    top.log2() + shift as f64
}
