//! Input-sequence generators with self-verified performance claims.
//!
//! Each structured generator returns a [`GeneratedFamily`]: the sequence
//! itself, the claims it is built to witness (exact covered counts for
//! DNF, DH_k, or the offline optimum), and a partition certificate when
//! the optimum is claimed. Construction re-runs the real engines and
//! checks every claim before returning, so a family that would violate
//! its own advertised counts is an error, never a silently wrong
//! instance.
//!
//! Claimed optima are always proved exactly: the certificate shows
//! OPT >= claimed, and because every certificate group here sums to
//! exactly 1, the claimed value equals floor(volume), which shows
//! OPT <= claimed.

use num_bigint::BigInt;
use num_traits::{One, Zero};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha12Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::algo::{dhk_run, dnf_run};
use crate::interval::IntervalSpec;
use crate::item::{format_rat, rat, ItemSize, Rat, Sequence};
use crate::oracle::{opt_volume_bound, verify_certificate, PartitionCertificate};
use crate::packing::TraceAction;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum FamilyError {
    #[error("eps {given} out of range: this family requires 0 < eps < {bound}")]
    BadEps { given: String, bound: String },
    #[error("unsupported border index: {0}")]
    BadP(String),
    #[error("bad parameters: {0}")]
    BadParams(String),
    #[error("self-verification failed: {0}")]
    ClaimFailed(String),
}

/// What a claim talks about.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "subject", rename_all = "snake_case")]
pub enum ClaimSubject {
    Dnf,
    /// Holds for every k >= min_k.
    Dhk { min_k: u32 },
    Opt,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Exactness {
    Exact,
    AtLeast,
    AtMost,
}

/// A verifiable statement about covered-bin counts on this sequence.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Claim {
    #[serde(flatten)]
    pub subject: ClaimSubject,
    pub expected: u64,
    pub exactness: Exactness,
}

impl Claim {
    fn exact(subject: ClaimSubject, expected: u64) -> Self {
        Claim { subject, expected, exactness: Exactness::Exact }
    }
}

/// A labeled slice of the sequence with its expected number of DNF
/// closures, for constructions whose parts play distinct roles.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Segment {
    pub label: String,
    /// Item index range [start, end).
    pub start: usize,
    pub end: usize,
    pub dnf_closures: u64,
}

/// A generated sequence bundled with its claims and proof material.
#[derive(Debug, Clone)]
pub struct GeneratedFamily {
    pub seq: Sequence,
    pub eps: Option<Rat>,
    pub scale_n: u64,
    pub interval: IntervalSpec,
    pub claims: Vec<Claim>,
    pub opt_cert: Option<PartitionCertificate>,
    pub segments: Vec<Segment>,
}

impl GeneratedFamily {
    pub fn expected_dnf(&self) -> Option<u64> {
        self.claims
            .iter()
            .find(|c| c.subject == ClaimSubject::Dnf)
            .map(|c| c.expected)
    }

    pub fn expected_dhk(&self) -> Option<(u32, u64)> {
        self.claims.iter().find_map(|c| match c.subject {
            ClaimSubject::Dhk { min_k } => Some((min_k, c.expected)),
            _ => None,
        })
    }

    pub fn expected_opt(&self) -> Option<u64> {
        self.claims
            .iter()
            .find(|c| c.subject == ClaimSubject::Opt)
            .map(|c| c.expected)
    }

    /// Re-checks every claim against the real engines and oracles.
    /// Constructors call this before returning.
    pub fn verify(&self) -> Result<(), FamilyError> {
        let fail = |msg: String| Err(FamilyError::ClaimFailed(msg));
        for it in &self.seq.items {
            if !self.interval.contains_strict(it) {
                return fail(format!(
                    "item {it} outside declared interval {}",
                    self.interval.label()
                ));
            }
        }
        let check = |label: &str, got: u64, claim: &Claim| -> Result<(), FamilyError> {
            let ok = match claim.exactness {
                Exactness::Exact => got == claim.expected,
                Exactness::AtLeast => got >= claim.expected,
                Exactness::AtMost => got <= claim.expected,
            };
            if ok {
                Ok(())
            } else {
                Err(FamilyError::ClaimFailed(format!(
                    "{label}: got {got}, claimed {:?} {}",
                    claim.exactness, claim.expected
                )))
            }
        };
        for claim in &self.claims {
            match claim.subject {
                ClaimSubject::Dnf => {
                    check("dnf", dnf_run(&self.seq).covered(), claim)?;
                }
                ClaimSubject::Dhk { min_k } => {
                    for k in [min_k, min_k + 2] {
                        let run = dhk_run(&self.seq, k)
                            .map_err(|e| FamilyError::BadParams(e.to_string()))?;
                        check(&format!("dh{k}"), run.covered(), claim)?;
                    }
                }
                ClaimSubject::Opt => {
                    let cert = self.opt_cert.as_ref().ok_or_else(|| {
                        FamilyError::ClaimFailed("optimum claimed without a certificate".into())
                    })?;
                    let achieved = verify_certificate(&self.seq, cert)
                        .map_err(|e| FamilyError::ClaimFailed(e.to_string()))?;
                    check("certificate", achieved, claim)?;
                    if claim.exactness == Exactness::Exact {
                        // Upper bound: covered bins need volume >= 1 each.
                        let cap = opt_volume_bound(&self.seq);
                        if cap != BigInt::from(claim.expected) {
                            return fail(format!(
                                "volume bound {cap} does not pin optimum {}",
                                claim.expected
                            ));
                        }
                    }
                }
            }
        }
        if !self.segments.is_empty() {
            let run = dnf_run(&self.seq);
            let mut per = vec![0u64; self.segments.len()];
            for ev in &run.trace.events {
                if ev.action != TraceAction::Close {
                    continue;
                }
                let seg = self
                    .segments
                    .iter()
                    .position(|s| s.start <= ev.item && ev.item < s.end);
                match seg {
                    Some(i) => per[i] += 1,
                    None => return fail(format!("close at item {} outside segments", ev.item)),
                }
            }
            for (seg, got) in self.segments.iter().zip(&per) {
                if *got != seg.dnf_closures {
                    return fail(format!(
                        "segment {}: {got} closes, expected {}",
                        seg.label, seg.dnf_closures
                    ));
                }
            }
        }
        Ok(())
    }
}

/// Largest power of 1/10 strictly below `bound`.
fn default_eps(bound: &Rat) -> Rat {
    let mut e = rat(1, 10);
    while &e >= bound {
        e /= BigInt::from(10);
    }
    e
}

/// Validates an explicit eps against `0 < eps < bound`, or picks the
/// default. Returns the value and its provenance fragment.
fn choose_eps(given: Option<Rat>, bound: &Rat) -> Result<(Rat, String), FamilyError> {
    match given {
        Some(e) => {
            if e <= Rat::zero() || &e >= bound {
                return Err(FamilyError::BadEps {
                    given: format_rat(&e),
                    bound: format_rat(bound),
                });
            }
            let label = format!("eps={}", format_rat(&e));
            Ok((e, label))
        }
        None => {
            let e = default_eps(bound);
            let label = format!("eps={} (default; bound {})", format_rat(&e), format_rat(bound));
            Ok((e, label))
        }
    }
}

fn ur(num: u64, den: u64) -> Rat {
    Rat::new(BigInt::from(num), BigInt::from(den))
}

fn push_item(items: &mut Vec<ItemSize>, value: Rat) -> Result<(), FamilyError> {
    items.push(ItemSize::new(value).map_err(|e| FamilyError::BadParams(e.to_string()))?);
    Ok(())
}

fn group_of(values: Vec<Rat>) -> Result<Vec<ItemSize>, FamilyError> {
    values
        .into_iter()
        .map(|v| ItemSize::new(v).map_err(|e| FamilyError::BadParams(e.to_string())))
        .collect()
}

/// Repeats of `(1/x)^(x-1), 1/x - eps, 1/x + eps`: each repeat makes DNF
/// overshoot once, wasting the pair straddling 1/x. DNF covers x*n bins
/// while the optimum regroups the same items into (x+1)*n full bins.
///
/// Any `0 < eps < 1/x` works; items then lie in (0, 1), which is the
/// declared interval for this unrestricted construction.
pub fn gen_dnf_one_border(x: u64, n: u64, eps: Option<Rat>) -> Result<GeneratedFamily, FamilyError> {
    if x < 2 {
        return Err(FamilyError::BadParams(format!("x must be >= 2, got {x}")));
    }
    let bound = ur(1, x);
    let (eps, eps_label) = choose_eps(eps, &bound)?;

    let base = ur(1, x);
    let mut items = Vec::new();
    for _ in 0..x * n {
        for _ in 0..x - 1 {
            push_item(&mut items, base.clone())?;
        }
        push_item(&mut items, &base - &eps)?;
        push_item(&mut items, &base + &eps)?;
    }

    // x*n mixed groups use up one straddling pair each; the displaced
    // plain items form n further full bins.
    let mut groups = Vec::new();
    for _ in 0..x * n {
        let mut g = vec![&base - &eps, &base + &eps];
        g.extend(std::iter::repeat(base.clone()).take((x - 2) as usize));
        groups.push(group_of(g)?);
    }
    for _ in 0..n {
        groups.push(group_of(vec![base.clone(); x as usize])?);
    }
    let opt = (x + 1) * n;

    let family = GeneratedFamily {
        seq: Sequence::with_provenance(
            items,
            format!("family=dnf-one-border x={x} n={n} {eps_label}"),
        ),
        eps: Some(eps),
        scale_n: n,
        interval: IntervalSpec::unrestricted(),
        claims: vec![
            Claim::exact(ClaimSubject::Dnf, x * n),
            Claim::exact(ClaimSubject::Opt, opt),
        ],
        opt_cert: Some(PartitionCertificate { groups, claimed: opt }),
        segments: Vec::new(),
    };
    family.verify()?;
    Ok(family)
}

/// Repeats of `(1/p - eps/(p-1))^(p-1), 1/p + eps`: each repeat sums to
/// exactly 1, so the optimum covers n bins. DH_k splits the two kinds:
/// the slightly shaved items close a bin per p+1 of them and the large
/// ones a bin per p, so DH_k covers
/// floor(n(p-1)/(p+1)) + floor(n/p) for every k >= p.
///
/// Requires `0 < eps < min{(p-1)/(p(p+1)), 1/(p(p-1))}`: the first term
/// keeps the shaved items above 1/(p+1) (and, for k = p, makes p+1 of
/// them the exact closing count in the fallback class), the second keeps
/// 1/p + eps below 1/(p-1).
pub fn gen_dhk_one_border(p: u64, n: u64, eps: Option<Rat>) -> Result<GeneratedFamily, FamilyError> {
    if p < 2 {
        return Err(FamilyError::BadP(format!("p must be >= 2, got {p}")));
    }
    let bound = std::cmp::min(ur(p - 1, p * (p + 1)), ur(1, p * (p - 1)));
    let (eps, eps_label) = choose_eps(eps, &bound)?;

    let shaved = ur(1, p) - &eps / BigInt::from(p - 1);
    let big = ur(1, p) + &eps;
    let mut items = Vec::new();
    let mut groups = Vec::new();
    for _ in 0..n {
        let mut g = Vec::new();
        for _ in 0..p - 1 {
            push_item(&mut items, shaved.clone())?;
            g.push(shaved.clone());
        }
        push_item(&mut items, big.clone())?;
        g.push(big.clone());
        groups.push(group_of(g)?);
    }

    let dhk = n * (p - 1) / (p + 1) + n / p;
    let family = GeneratedFamily {
        seq: Sequence::with_provenance(
            items,
            format!("family=dhk-one-border p={p} n={n} {eps_label}"),
        ),
        eps: Some(eps),
        scale_n: n,
        interval: IntervalSpec::new(ur(1, p + 1), ur(1, p - 1))
            .map_err(|e| FamilyError::BadParams(e.to_string()))?,
        claims: vec![
            Claim::exact(ClaimSubject::Dhk { min_k: p as u32 }, dhk),
            Claim::exact(ClaimSubject::Opt, n),
        ],
        opt_cert: Some(PartitionCertificate { groups, claimed: n }),
        segments: Vec::new(),
    };
    family.verify()?;
    Ok(family)
}

/// Five-part sequence on which DNF covers p(p+1)n bins while the optimum
/// covers (p^2+2p+2)n, for an interval containing both borders 1/p and
/// 1/(p+1). Writing N = (p+1)n, u = 1/(p+1), d = (p-2)eps and
/// f = (p+2)/(p(p+1)) + eps (note u + f - eps = 2/p):
///
///   1. `(1/p)^(p-1), 1/p - 2eps, f`            repeated N(p-2) times
///   2. `u^p, u - eps, f`                       repeated N times
///   3. `u + i*d, u - (i+1)*d, (u+eps)^(p-2), u - eps, f`   i = 1..N-1
///   4. `u - d, (u+eps)^(p-2), u - eps, f`      once
///   5. `u + N*d`                               once
///
/// Every part leaves DNF's bin empty after its final f (parts 1-4) and
/// closes exactly once per repeat; part 5 stays open. The optimum
/// regroups into N(p-2) + 2N full bins pairing each f with one
/// border-straddling item, N bins pairing the +i*d and -i*d drifts, and
/// n bins of p+1 plain u items, all summing to exactly 1.
///
/// eps bound, with M = N(p-2) the largest drift multiple:
///   - the declared lower endpoint a = u - 2*M*eps must stay at or above
///     1/(p+2) so the interval keeps exactly two borders:
///     eps <= 1/(2M(p+1)(p+2));
///   - the largest item f must stay below b = 1/(p-1):
///     eps < 2/((p-1)p(p+1)).
/// The first bound also keeps every drifted item strictly between a and
/// 1/p. We require eps strictly below the minimum of both.
pub fn gen_dnf_two_border(p: u64, n: u64, eps: Option<Rat>) -> Result<GeneratedFamily, FamilyError> {
    if p < 3 {
        return Err(FamilyError::BadP(format!("p must be >= 3, got {p}")));
    }
    if n == 0 {
        return gen_dnf_two_border_empty(p);
    }
    let nn = (p + 1) * n;
    let m = nn * (p - 2);
    let bound = std::cmp::min(
        ur(1, 2 * m * (p + 1) * (p + 2)),
        ur(2, (p - 1) * p * (p + 1)),
    );
    let (eps, eps_label) = choose_eps(eps, &bound)?;

    let u = ur(1, p + 1);
    let big = ur(1, p);
    let filler = ur(p + 2, p * (p + 1)) + &eps;
    let drift = |i: u64| &eps * BigInt::from(i * (p - 2));

    let mut items = Vec::new();
    let mut segments = Vec::new();

    let start = items.len();
    for _ in 0..nn * (p - 2) {
        for _ in 0..p - 1 {
            push_item(&mut items, big.clone())?;
        }
        push_item(&mut items, &big - &eps * BigInt::from(2))?;
        push_item(&mut items, filler.clone())?;
    }
    segments.push(Segment {
        label: "overshoot-at-1/p".into(),
        start,
        end: items.len(),
        dnf_closures: nn * (p - 2),
    });

    let start = items.len();
    for _ in 0..nn {
        for _ in 0..p {
            push_item(&mut items, u.clone())?;
        }
        push_item(&mut items, &u - &eps)?;
        push_item(&mut items, filler.clone())?;
    }
    segments.push(Segment {
        label: "overshoot-at-1/(p+1)".into(),
        start,
        end: items.len(),
        dnf_closures: nn,
    });

    let start = items.len();
    for i in 1..nn {
        push_item(&mut items, &u + drift(i))?;
        push_item(&mut items, &u - drift(i + 1))?;
        for _ in 0..p - 2 {
            push_item(&mut items, &u + &eps)?;
        }
        push_item(&mut items, &u - &eps)?;
        push_item(&mut items, filler.clone())?;
    }
    segments.push(Segment {
        label: "drift-chain".into(),
        start,
        end: items.len(),
        dnf_closures: nn - 1,
    });

    let start = items.len();
    push_item(&mut items, &u - drift(1))?;
    for _ in 0..p - 2 {
        push_item(&mut items, &u + &eps)?;
    }
    push_item(&mut items, &u - &eps)?;
    push_item(&mut items, filler.clone())?;
    segments.push(Segment {
        label: "drift-close".into(),
        start,
        end: items.len(),
        dnf_closures: 1,
    });

    let start = items.len();
    push_item(&mut items, &u + drift(nn))?;
    segments.push(Segment {
        label: "tail-open".into(),
        start,
        end: items.len(),
        dnf_closures: 0,
    });

    let mut groups = Vec::new();
    for _ in 0..nn * (p - 2) {
        let mut g = vec![
            filler.clone(),
            &big - &eps * BigInt::from(2),
            &u + &eps,
        ];
        g.extend(std::iter::repeat(big.clone()).take((p - 3) as usize));
        groups.push(group_of(g)?);
    }
    for _ in 0..2 * nn {
        let mut g = vec![filler.clone(), &u - &eps];
        g.extend(std::iter::repeat(big.clone()).take((p - 2) as usize));
        groups.push(group_of(g)?);
    }
    for i in 1..=nn {
        let mut g = vec![&u + drift(i), &u - drift(i)];
        g.extend(std::iter::repeat(u.clone()).take((p - 1) as usize));
        groups.push(group_of(g)?);
    }
    for _ in 0..n {
        groups.push(group_of(vec![u.clone(); (p + 1) as usize])?);
    }
    let opt = (p * p + 2 * p + 2) * n;

    let a = &u - &eps * BigInt::from(2 * m);
    let family = GeneratedFamily {
        seq: Sequence::with_provenance(
            items,
            format!("family=dnf-two-border p={p} n={n} {eps_label}"),
        ),
        eps: Some(eps),
        scale_n: n,
        interval: IntervalSpec::new(a, ur(1, p - 1))
            .map_err(|e| FamilyError::BadParams(e.to_string()))?,
        claims: vec![
            Claim::exact(ClaimSubject::Dnf, p * (p + 1) * n),
            Claim::exact(ClaimSubject::Opt, opt),
        ],
        opt_cert: Some(PartitionCertificate { groups, claimed: opt }),
        segments,
    };
    family.verify()?;
    Ok(family)
}

fn gen_dnf_two_border_empty(p: u64) -> Result<GeneratedFamily, FamilyError> {
    let family = GeneratedFamily {
        seq: Sequence::with_provenance(
            Vec::new(),
            format!("family=dnf-two-border p={p} n=0"),
        ),
        eps: None,
        scale_n: 0,
        interval: IntervalSpec::new(ur(1, p + 2), ur(1, p - 1))
            .map_err(|e| FamilyError::BadParams(e.to_string()))?,
        claims: vec![
            Claim::exact(ClaimSubject::Dnf, 0),
            Claim::exact(ClaimSubject::Opt, 0),
        ],
        opt_cert: Some(PartitionCertificate { groups: Vec::new(), claimed: 0 }),
        segments: Vec::new(),
    };
    family.verify()?;
    Ok(family)
}

/// n small items just under 1/(p+1), n medium items just over
/// (p+2)/(p(p+1)), and n(p-2) items just under 1/p. One of each kind
/// plus p-2 of the third sums to exactly 1, so the optimum covers n
/// bins. DH_k keeps the three kinds apart (classes p+2, p, p+1), so it
/// covers floor(n/(p+2)) + floor(n/p) + floor(n(p-2)/(p+1)) for every
/// k >= p+1.
///
/// eps bound:
///   - smalls stay above 1/(p+2) (and p+2 of them still close the
///     fallback bin when k = p+1): eps < 1/((p+1)(p+2));
///   - the third kind stays above 1/(p+1): eps < 1/(p(p+1));
///   - mediums stay below 1/(p-1): (p-1)eps < 2/((p-1)p(p+1)).
pub fn gen_dhk_two_border(p: u64, n: u64, eps: Option<Rat>) -> Result<GeneratedFamily, FamilyError> {
    if p < 2 {
        return Err(FamilyError::BadP(format!("p must be >= 2, got {p}")));
    }
    let bound = [
        ur(1, (p + 1) * (p + 2)),
        ur(1, p * (p + 1)),
        ur(2, (p - 1) * (p - 1) * p * (p + 1)),
    ]
    .into_iter()
    .min()
    .unwrap();
    let (eps, eps_label) = choose_eps(eps, &bound)?;

    let small = ur(1, p + 1) - &eps;
    let medium = ur(p + 2, p * (p + 1)) + &eps * BigInt::from(p - 1);
    let third = ur(1, p) - &eps;

    let mut items = Vec::new();
    for _ in 0..n {
        push_item(&mut items, small.clone())?;
    }
    for _ in 0..n {
        push_item(&mut items, medium.clone())?;
    }
    for _ in 0..n * (p - 2) {
        push_item(&mut items, third.clone())?;
    }

    let mut groups = Vec::new();
    for _ in 0..n {
        let mut g = vec![small.clone(), medium.clone()];
        g.extend(std::iter::repeat(third.clone()).take((p - 2) as usize));
        groups.push(group_of(g)?);
    }

    let dhk = n / (p + 2) + n / p + n * (p - 2) / (p + 1);
    let family = GeneratedFamily {
        seq: Sequence::with_provenance(
            items,
            format!("family=dhk-two-border p={p} n={n} {eps_label}"),
        ),
        eps: Some(eps),
        scale_n: n,
        interval: IntervalSpec::new(ur(1, p + 2), ur(1, p - 1))
            .map_err(|e| FamilyError::BadParams(e.to_string()))?,
        claims: vec![
            Claim::exact(ClaimSubject::Dhk { min_k: (p + 1) as u32 }, dhk),
            Claim::exact(ClaimSubject::Opt, n),
        ],
        opt_cert: Some(PartitionCertificate { groups, claimed: n }),
        segments: Vec::new(),
    };
    family.verify()?;
    Ok(family)
}

/// 2n repeats of `1/2, (1/(2n))^(n-1), 1/2`. In the given order DNF
/// covers only 2n bins: the fillers between the two halves are wasted.
/// Regrouped, the halves pair up and the fillers stack 2n per bin, so
/// both the optimum and DH_k (any k >= 2) cover 3n - 1 bins, which also
/// equals the total volume.
pub fn gen_rwor(n: u64) -> Result<GeneratedFamily, FamilyError> {
    if n == 0 {
        return Err(FamilyError::BadParams("n must be >= 1".into()));
    }
    let half = rat(1, 2);
    let filler = ur(1, 2 * n);
    let mut items = Vec::new();
    for _ in 0..2 * n {
        push_item(&mut items, half.clone())?;
        for _ in 0..n - 1 {
            push_item(&mut items, filler.clone())?;
        }
        push_item(&mut items, half.clone())?;
    }

    let mut groups = Vec::new();
    for _ in 0..2 * n {
        groups.push(group_of(vec![half.clone(), half.clone()])?);
    }
    for _ in 0..n - 1 {
        groups.push(group_of(vec![filler.clone(); (2 * n) as usize])?);
    }
    let opt = 3 * n - 1;

    let family = GeneratedFamily {
        seq: Sequence::with_provenance(items, format!("family=rwor n={n}")),
        eps: None,
        scale_n: n,
        interval: IntervalSpec::unrestricted(),
        claims: vec![
            Claim::exact(ClaimSubject::Dnf, 2 * n),
            Claim::exact(ClaimSubject::Dhk { min_k: 2 }, opt),
            Claim::exact(ClaimSubject::Opt, opt),
        ],
        opt_cert: Some(PartitionCertificate { groups, claimed: opt }),
        segments: Vec::new(),
    };
    family.verify()?;
    // The filler class index grows with n; cover the bordered regime too
    // (verify() already exercises k = 2 and 4, where fillers pool in the
    // fallback class for n >= 3).
    let run = dhk_run(&family.seq, (2 * n) as u32)
        .map_err(|e| FamilyError::BadParams(e.to_string()))?;
    if run.covered() != opt {
        return Err(FamilyError::ClaimFailed(format!(
            "dh{} covered {}, expected {opt}",
            2 * n,
            run.covered()
        )));
    }
    Ok(family)
}

/// Order for two-size sequences: an i.i.d. fair coin per position, or an
/// exact multiset shuffled once.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TwoSizeOrder {
    Iid { n: u64 },
    Counts { l: u64, s: u64 },
}

/// Items of sizes 1 - eps (large) and eps (small). A large plus anything
/// reaches 1; smalls alone never do, because eps < 1/n over the whole
/// sequence length n.
pub fn gen_two_size(
    order: TwoSizeOrder,
    eps: Option<Rat>,
    seed: u64,
) -> Result<Sequence, FamilyError> {
    let total = match order {
        TwoSizeOrder::Iid { n } => n,
        TwoSizeOrder::Counts { l, s } => l + s,
    };
    if total == 0 {
        return Err(FamilyError::BadParams("sequence length must be >= 1".into()));
    }
    let bound = ur(1, total);
    let (eps, eps_label) = choose_eps(eps, &bound)?;
    let large = Rat::one() - &eps;
    let small = eps.clone();

    let mut rng = ChaCha12Rng::seed_from_u64(seed);
    let picks: Vec<bool> = match order {
        TwoSizeOrder::Iid { n } => (0..n).map(|_| rng.gen_bool(0.5)).collect(),
        TwoSizeOrder::Counts { l, s } => {
            let mut v: Vec<bool> = std::iter::repeat(true)
                .take(l as usize)
                .chain(std::iter::repeat(false).take(s as usize))
                .collect();
            v.shuffle(&mut rng);
            v
        }
    };
    let mut items = Vec::new();
    for is_large in picks {
        push_item(&mut items, if is_large { large.clone() } else { small.clone() })?;
    }
    let mode = match order {
        TwoSizeOrder::Iid { n } => format!("iid n={n}"),
        TwoSizeOrder::Counts { l, s } => format!("counts l={l} s={s}"),
    };
    Ok(Sequence::with_provenance(
        items,
        format!("family=two-size {mode} seed={seed} prng=chacha12 {eps_label}"),
    ))
}

/// Per covered bin: p items just under 1/p, then one item just under b.
/// DNF closes on the final item, so every bin holds volume
/// 1 + b - (p+1)eps while covering exactly `bins` bins. This is the
/// worst case for the covered-volume ratio on (1/(p+1), b).
///
/// eps bound: eps < 1/(2p(p+1)) keeps the shaved items in the upper half
/// of the gap below 1/p, and eps < b/(p+1) guarantees the final item
/// still tips the bin over 1.
pub fn gen_minmin_worst(
    p: u64,
    b: Rat,
    eps: Option<Rat>,
    bins: u64,
) -> Result<GeneratedFamily, FamilyError> {
    if p < 2 {
        return Err(FamilyError::BadP(format!("p must be >= 2, got {p}")));
    }
    if b <= ur(1, p) || b > ur(1, p - 1) {
        return Err(FamilyError::BadParams(format!(
            "b must lie in (1/{p}, 1/{}], got {}",
            p - 1,
            format_rat(&b)
        )));
    }
    let bound = std::cmp::min(ur(1, 2 * p * (p + 1)), &b / BigInt::from(p + 1));
    let (eps, eps_label) = choose_eps(eps, &bound)?;

    let shaved = ur(1, p) - &eps;
    let closer = &b - &eps;
    let mut items = Vec::new();
    for _ in 0..bins {
        for _ in 0..p {
            push_item(&mut items, shaved.clone())?;
        }
        push_item(&mut items, closer.clone())?;
    }

    let family = GeneratedFamily {
        seq: Sequence::with_provenance(
            items,
            format!("family=minmin-worst p={p} b={} bins={bins} {eps_label}", format_rat(&b)),
        ),
        eps: Some(eps),
        scale_n: bins,
        interval: IntervalSpec::new(ur(1, p + 1), b)
            .map_err(|e| FamilyError::BadParams(e.to_string()))?,
        claims: vec![Claim::exact(ClaimSubject::Dnf, bins)],
        opt_cert: None,
        segments: Vec::new(),
    };
    family.verify()?;
    Ok(family)
}

/// n independent uniform draws from (0, 1), as f64 for Monte Carlo runs.
/// Deterministic in the seed; exact zeros are redrawn.
pub fn gen_uniform_f64(n: usize, seed: u64) -> Vec<f64> {
    let mut rng = ChaCha12Rng::seed_from_u64(seed);
    (0..n)
        .map(|_| loop {
            let v: f64 = rng.gen();
            if v > 0.0 {
                break v;
            }
        })
        .collect()
}

/// Same draws as [`gen_uniform_f64`], converted exactly to rationals.
pub fn gen_uniform(n: usize, seed: u64) -> Sequence {
    let items = gen_uniform_f64(n, seed)
        .into_iter()
        .map(|v| {
            ItemSize::new(Rat::from_float(v).expect("draw is finite")).expect("draw is in (0,1)")
        })
        .collect();
    Sequence::with_provenance(items, format!("family=uniform n={n} seed={seed} prng=chacha12"))
}
