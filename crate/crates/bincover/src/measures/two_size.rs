//! Exact expected DNF performance on two item sizes under a uniformly
//! random order.
//!
//! With l items of size 1 - eps and s of size eps, where eps is small
//! enough that all smalls together stay below 1, the open bin is always
//! in one of three states: empty (N), holding one large (L), or holding
//! only smalls (S). A large closes any nonempty bin; a small closes a
//! bin holding a large; smalls never close among themselves. Closures
//! therefore depend only on the arrival pattern of kinds, not on eps.

use num_bigint::BigInt;
use num_traits::{One, Zero};

use super::MeasureError;
use crate::item::Rat;

const MAX_TOTAL: u64 = 10_000;

/// Exact expectation of DNF's covered count over all orderings of the
/// two-size multiset. Quadratic in l + s.
///
/// States are indexed N, L, S. Writing E(l, s, q) for the expected
/// closures still to come, conditioning on the next kind gives
///
///   E(l,s,N) = l/(l+s) E(l-1,s,L) + s/(l+s) E(l,s-1,S)
///   E(l,s,L) = l/(l+s) (1 + E(l-1,s,N)) + s/(l+s) (1 + E(l,s-1,N))
///   E(l,s,S) = l/(l+s) (1 + E(l-1,s,N)) + s/(l+s) E(l,s-1,S)
///
/// To keep the arithmetic integral we tabulate W = E * C(l+s, l); the
/// prefactors collapse to binomials since C(l+s,l) * l/(l+s)
/// = C(l+s-1, l-1) and C(l+s,l) * s/(l+s) = C(l+s-1, l).
pub fn exact_expected_dnf_two_size(l: u64, s: u64) -> Result<Rat, MeasureError> {
    if l + s > MAX_TOTAL {
        return Err(MeasureError::BadParams(format!(
            "l + s must be at most {MAX_TOTAL}, got {}",
            l + s
        )));
    }
    if l + s == 0 {
        return Ok(Rat::zero());
    }
    const N: usize = 0;
    const L: usize = 1;
    const S: usize = 2;
    let width = (s + 1) as usize;
    // prev = row for l' - 1, cur = row for l'.
    let mut prev: Vec<[BigInt; 3]> = Vec::new();
    let mut cur: Vec<[BigInt; 3]> =
        vec![[BigInt::zero(), BigInt::zero(), BigInt::zero()]; width];

    for lp in 0..=l {
        if lp > 0 {
            std::mem::swap(&mut prev, &mut cur);
            if cur.is_empty() {
                cur = vec![[BigInt::zero(), BigInt::zero(), BigInt::zero()]; width];
            }
        }
        // bl = C(lp+sp-1, lp-1), the weight of "a large arrives next";
        // advanced along sp by bl *= (lp+sp) / (sp+1).
        let mut bl = if lp >= 1 { BigInt::one() } else { BigInt::zero() };
        for sp in 0..=s {
            let spu = sp as usize;
            if lp == 0 && sp == 0 {
                cur[0] = [BigInt::zero(), BigInt::zero(), BigInt::zero()];
                continue;
            }
            if sp > 0 && lp >= 1 {
                bl = &bl * BigInt::from(lp + sp - 1) / BigInt::from(sp);
            }
            // bs = C(lp+sp-1, lp) = bl * sp / lp, the small-arrival weight.
            let bs = if sp == 0 {
                BigInt::zero()
            } else if lp == 0 {
                BigInt::one()
            } else {
                &bl * BigInt::from(sp) / BigInt::from(lp)
            };

            let mut n_val = BigInt::zero();
            let mut l_val = BigInt::zero();
            let mut s_val = BigInt::zero();
            if lp > 0 {
                let from_large = &prev[spu];
                n_val += &from_large[L];
                l_val += &bl + &from_large[N];
                s_val += &bl + &from_large[N];
            }
            if sp > 0 {
                let from_small = cur[spu - 1].clone();
                n_val += &from_small[S];
                l_val += &bs + &from_small[N];
                s_val += &from_small[S];
            }
            cur[spu] = [n_val, l_val, s_val];
        }
    }

    let mut denom = BigInt::one();
    for i in 1..=l.min(s) {
        denom = denom * BigInt::from(l + s - i + 1) / BigInt::from(i);
    }
    Ok(Rat::new(cur[s as usize][N].clone(), denom))
}

/// The same expectation by brute force over all C(l+s, l) distinct kind
/// patterns, for cross-checking. Practical for l + s up to ~20.
pub fn exhaustive_expected_dnf_two_size(l: u64, s: u64) -> Result<Rat, MeasureError> {
    let n = l + s;
    if n > 24 {
        return Err(MeasureError::BadParams(format!(
            "exhaustive check limited to l + s <= 24, got {n}"
        )));
    }
    if n == 0 {
        return Ok(Rat::zero());
    }
    let mut total = BigInt::zero();
    let mut patterns = BigInt::zero();
    for mask in 0u32..(1 << n) {
        if u64::from(mask.count_ones()) != l {
            continue;
        }
        patterns += 1;
        let mut state = 0u8; // 0 = N, 1 = L, 2 = S
        let mut covered = 0u32;
        for pos in 0..n {
            let large = mask >> pos & 1 == 1;
            state = match (state, large) {
                (0, true) => 1,
                (0, false) => 2,
                (1, _) => {
                    covered += 1;
                    0
                }
                (2, true) => {
                    covered += 1;
                    0
                }
                (2, false) => 2,
                _ => unreachable!(),
            };
        }
        total += BigInt::from(covered);
    }
    Ok(Rat::new(total, patterns))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algo::dnf_run;
    use crate::item::{rat, ItemSize, Sequence};

    #[test]
    fn tiny_closed_forms() {
        assert_eq!(exact_expected_dnf_two_size(0, 0).unwrap(), Rat::zero());
        assert_eq!(exact_expected_dnf_two_size(1, 0).unwrap(), Rat::zero());
        assert_eq!(exact_expected_dnf_two_size(0, 5).unwrap(), Rat::zero());
        assert_eq!(exact_expected_dnf_two_size(2, 0).unwrap(), Rat::one());
        // All six patterns of LLSS averaged: (1+2+2+2+2+1)/6.
        assert_eq!(exact_expected_dnf_two_size(2, 2).unwrap(), rat(5, 3));
    }

    #[test]
    fn dp_equals_exhaustive_up_to_nine_items() {
        for l in 0..=9u64 {
            for s in 0..=(9 - l) {
                assert_eq!(
                    exact_expected_dnf_two_size(l, s).unwrap(),
                    exhaustive_expected_dnf_two_size(l, s).unwrap(),
                    "l={l} s={s}"
                );
            }
        }
    }

    #[test]
    fn state_walk_matches_real_engine_runs() {
        // The 3-state model must reproduce dnf_run on materialized
        // sequences: check every pattern for l=3, s=4, eps=1/14.
        let (l, s) = (3u64, 4u64);
        let n = l + s;
        let eps = rat(1, 2 * n as i64);
        let large = ItemSize::new(Rat::one() - &eps).unwrap();
        let small = ItemSize::new(eps).unwrap();
        let mut total_model = 0u64;
        let mut total_engine = 0u64;
        for mask in 0u32..(1 << n) {
            if u64::from(mask.count_ones()) != l {
                continue;
            }
            let items: Vec<ItemSize> = (0..n)
                .map(|p| if mask >> p & 1 == 1 { large.clone() } else { small.clone() })
                .collect();
            total_engine += dnf_run(&Sequence::new(items)).covered();
            let mut state = 0u8;
            for p in 0..n {
                let is_large = mask >> p & 1 == 1;
                state = match (state, is_large) {
                    (0, true) => 1,
                    (0, false) => 2,
                    (1, _) => {
                        total_model += 1;
                        0
                    }
                    (2, true) => {
                        total_model += 1;
                        0
                    }
                    (2, false) => 2,
                    _ => unreachable!(),
                };
            }
        }
        assert_eq!(total_model, total_engine);
    }

    #[test]
    fn midsize_expectation_approaches_two_fifths_per_item() {
        let e = exact_expected_dnf_two_size(100, 100).unwrap();
        let per_item = crate::item::rat_to_f64(&(e / BigInt::from(200)));
        assert!((per_item - 0.4).abs() < 0.05, "per-item rate {per_item}");
    }

    #[test]
    fn rejects_oversized_requests() {
        assert!(exact_expected_dnf_two_size(9000, 9000).is_err());
    }
}
