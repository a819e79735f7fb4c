//! Acceptance gate: eleven end-to-end criteria covering the engines,
//! the adversarial families, the oracles, every performance measure,
//! and the certified closed forms. Each criterion is one test that
//! prints a single `criterion NN PASS` line on success (visible with
//! `--nocapture`); zero-padded names keep the harness output ordered.
//!
//! Every tolerance and time budget is pinned here as a constant. A
//! process-wide lock serializes the criteria so each budget is measured
//! with the machine to itself.

use std::sync::{Mutex, MutexGuard};
use std::time::Instant;

use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::seq::SliceRandom;
use rand::Rng;

use bincover::algo::Algorithm;
use bincover::analytic::{eru_dhk, eru_dnf, eru_sweep, euler_e, mu, PrecReal};
use bincover::experiments::run_uniform_experiment;
use bincover::families::{
    gen_dhk_one_border, gen_dhk_two_border, gen_dnf_one_border, gen_dnf_two_border, gen_rwor,
    gen_two_size, gen_uniform, TwoSizeOrder,
};
use bincover::interval::IntervalSpec;
use bincover::item::{rat, rat_to_f64, ItemSize, Rat, Sequence};
use bincover::measures::{
    dnf_worst_order_bounds, exact_expected_dnf_two_size, exhaustive_expected_dnf_two_size,
    markov_stationary, minmin_ratio_dhk, minmin_ratio_dnf, minmin_unrestricted, worst_order_value,
    MarkovChain, MeasureError, WorstOrderMode, DEFAULT_ARRANGEMENT_BUDGET,
};
use bincover::oracle::{
    opt_exact, opt_two_size, opt_volume_bound, verify_certificate, OptOptions,
    PartitionCertificate,
};
use bincover::packing::validate_reasonable;
use bincover::rng::{derive_seed, stream_rng};

/// Master seed for every randomized criterion; matches the CLI default.
const SEED: u64 = 0xB1C0_5EED;

// Pinned tolerances.
const TWO_SIZE_RATIO_TOL: f64 = 0.01; // |ratio - 4/5| on the 5000+5000 split
const TWO_SIZE_DHK_TOL: f64 = 0.01; // |ratio - 1/2| for the class engine
const UNIFORM_TOL_DNF: f64 = 0.005;
const UNIFORM_TOL_DH2: f64 = 0.005;
const UNIFORM_TOL_DH50: f64 = 0.01;
const PINNED_DECIMAL_TOL: f64 = 1e-5; // closed form vs its quoted decimal
const CERTIFIED_DIGITS: u32 = 25; // identity checks in exact interval arithmetic

// Pinned wall-clock budgets, seconds.
const BUDGET_GOLDEN: f64 = 1.0;
const BUDGET_OVERSHOOT: f64 = 1.0;
const BUDGET_ONE_BORDER: f64 = 5.0;
const BUDGET_TWO_BORDER: f64 = 10.0;
const BUDGET_WORST_ORDER: f64 = 300.0;
const BUDGET_STATIONARY: f64 = 1.0;
const BUDGET_RANDOM_ORDER: f64 = 120.0;
const BUDGET_UNIFORM: f64 = 300.0;
const BUDGET_ANALYTIC: f64 = 1.0;
const BUDGET_MINMIN: f64 = 1.0;
const BUDGET_PROPERTIES: f64 = 300.0;

static GATE: Mutex<()> = Mutex::new(());

fn serial() -> MutexGuard<'static, ()> {
    // A criterion that fails poisons the lock; later criteria should
    // still run and report on their own merits.
    GATE.lock().unwrap_or_else(|poisoned| poisoned.into_inner())
}

fn pass(number: u32, what: &str, started: Instant, budget_secs: f64) {
    let secs = started.elapsed().as_secs_f64();
    assert!(
        secs < budget_secs,
        "criterion {number:02} exceeded its {budget_secs} s budget: took {secs:.1} s"
    );
    println!("criterion {number:02} PASS ({secs:.2} s): {what}");
}

fn dhk(k: u32) -> Algorithm {
    Algorithm::dhk(k).expect("k >= 1")
}

fn item(r: &Rat) -> ItemSize {
    ItemSize::new(r.clone()).expect("size in (0, 1)")
}

/// Calls `f` once per multiset of 1..=max_items items over `sizes`.
fn for_each_multiset(sizes: &[Rat], max_items: usize, f: &mut impl FnMut(&Sequence)) {
    fn rec(
        sizes: &[Rat],
        dim: usize,
        left: usize,
        picked: &mut Vec<ItemSize>,
        f: &mut impl FnMut(&Sequence),
    ) {
        if dim == sizes.len() {
            if !picked.is_empty() {
                f(&Sequence::new(picked.clone()));
            }
            return;
        }
        for count in 0..=left {
            let before = picked.len();
            for _ in 0..count {
                picked.push(item(&sizes[dim]));
            }
            rec(sizes, dim + 1, left - count, picked, f);
            picked.truncate(before);
        }
    }
    rec(sizes, 0, max_items, &mut Vec::new(), f);
}

/// Calls `f` once per distinct ordering of the multiset.
fn for_each_distinct_order(seq: &Sequence, f: &mut impl FnMut(&Sequence)) {
    let mut counts: Vec<(ItemSize, usize)> = Vec::new();
    for it in seq.sorted_desc() {
        match counts.last_mut() {
            Some((size, c)) if *size == it => *c += 1,
            _ => counts.push((it, 1)),
        }
    }
    fn rec(
        counts: &mut Vec<(ItemSize, usize)>,
        prefix: &mut Vec<ItemSize>,
        total: usize,
        f: &mut impl FnMut(&Sequence),
    ) {
        if prefix.len() == total {
            f(&Sequence::new(prefix.clone()));
            return;
        }
        for i in 0..counts.len() {
            if counts[i].1 == 0 {
                continue;
            }
            counts[i].1 -= 1;
            prefix.push(counts[i].0.clone());
            rec(counts, prefix, total, f);
            prefix.pop();
            counts[i].1 += 1;
        }
    }
    let total = seq.len();
    rec(&mut counts, &mut Vec::new(), total, f);
}

fn worst_value(alg: &Algorithm, seq: &Sequence) -> u64 {
    worst_order_value(alg, seq, &WorstOrderMode::Exact { budget: DEFAULT_ARRANGEMENT_BUDGET })
        .expect("enumeration fits the budget")
        .covered()
}

/// Largest set of disjoint pairs with sum >= 1, as a checkable
/// partition certificate.
fn pairing_certificate(seq: &Sequence) -> PartitionCertificate {
    let mut asc = seq.sorted_desc();
    asc.reverse();
    let one = Rat::one();
    let mut groups = Vec::new();
    let mut lo = 0usize;
    let mut hi = asc.len();
    while lo + 1 < hi {
        if asc[lo].value() + asc[hi - 1].value() >= one {
            groups.push(vec![asc[lo].clone(), asc[hi - 1].clone()]);
            lo += 1;
            hi -= 1;
        } else {
            lo += 1;
        }
    }
    let claimed = groups.len() as u64;
    PartitionCertificate { groups, claimed }
}

/// 10^-digits as an exact rational.
fn pow10_neg(digits: u32) -> Rat {
    let tenth = rat(1, 10);
    let mut r = Rat::one();
    for _ in 0..digits {
        r *= &tenth;
    }
    r
}

/// The enclosure provably lies within 10^-digits of zero.
fn certified_small(d: &PrecReal, digits: u32) -> bool {
    d.val().abs() + d.err().clone() < pow10_neg(digits)
}

#[test]
fn criterion_01_engine_golden_counts() {
    let _gate = serial();
    let t = Instant::now();
    for n in [1u64, 2, 5, 20] {
        let fam = gen_rwor(n).expect("gap family generates");
        assert_eq!(
            Algorithm::Dnf.run(&fam.seq).covered(),
            2 * n,
            "single-bin engine on the gap family, n={n}"
        );
        assert_eq!(
            dhk(2).run(&fam.seq).covered(),
            3 * n - 1,
            "class engine on the gap family, n={n}"
        );
    }
    pass(1, "gap family: dnf covers 2n, dh2 covers 3n-1 for n in {1,2,5,20}", t, BUDGET_GOLDEN);
}

#[test]
fn criterion_02_overshoot_family_certificates() {
    let _gate = serial();
    let t = Instant::now();
    for x in [2u64, 3, 4] {
        for n in [1u64, 3] {
            let fam = gen_dnf_one_border(x, n, None).expect("overshoot family generates");
            assert_eq!(
                Algorithm::Dnf.run(&fam.seq).covered(),
                x * n,
                "dnf count at x={x} n={n}"
            );
            let cert = fam.opt_cert.as_ref().expect("certificate present");
            assert_eq!(cert.claimed, (x + 1) * n);
            assert_eq!(
                verify_certificate(&fam.seq, cert).expect("certificate checks"),
                (x + 1) * n,
                "certificate count at x={x} n={n}"
            );
            if x * n * (x + 1) <= 12 {
                let opt = opt_exact(&fam.seq, &OptOptions::default()).expect("search in budget");
                assert_eq!(opt, (x + 1) * n, "exact optimum confirms the certificate");
            }
        }
    }
    pass(
        2,
        "overshoot family: dnf xn vs certified optimum (x+1)n, oracle-confirmed through 12 items",
        t,
        BUDGET_OVERSHOOT,
    );
}

#[test]
fn criterion_03_one_border_ratios() {
    let _gate = serial();
    let t = Instant::now();
    for p in [2u64, 3, 4] {
        // Class-splitting family at full-period scales n = p(p+1)m.
        for m in [1u64, 2] {
            let n = p * (p + 1) * m;
            let fam = gen_dhk_one_border(p, n, None).expect("family generates");
            let covered = dhk(p as u32).run(&fam.seq).covered();
            let opt = verify_certificate(&fam.seq, fam.opt_cert.as_ref().expect("certificate"))
                .expect("certificate checks");
            assert_eq!(opt, n);
            assert_eq!(
                rat(covered as i64, opt as i64),
                rat((p * p + 1) as i64, (p * (p + 1)) as i64),
                "class-engine ratio at p={p}, n={n}"
            );
        }
        // Overshoot family: dnf achieves exactly p/(p+1) of the optimum.
        let fam = gen_dnf_one_border(p, 2, None).expect("family generates");
        let covered = Algorithm::Dnf.run(&fam.seq).covered();
        let opt = verify_certificate(&fam.seq, fam.opt_cert.as_ref().expect("certificate"))
            .expect("certificate checks");
        assert_eq!(
            rat(covered as i64, opt as i64),
            rat(p as i64, (p + 1) as i64),
            "single-bin ratio at p={p}"
        );
    }
    pass(
        3,
        "one-border ratios: dh_p/opt = (p^2+1)/(p(p+1)) and dnf/opt = p/(p+1) for p in {2,3,4}",
        t,
        BUDGET_ONE_BORDER,
    );
}

#[test]
fn criterion_04_two_border_constructions() {
    let _gate = serial();
    let t = Instant::now();

    let fam = gen_dnf_two_border(3, 1, None).expect("drift family generates");
    assert_eq!(Algorithm::Dnf.run(&fam.seq).covered(), 12);
    let opt = verify_certificate(&fam.seq, fam.opt_cert.as_ref().expect("certificate"))
        .expect("certificate checks");
    assert_eq!(opt, 17);

    let fam = gen_dhk_two_border(2, 12, None).expect("family generates");
    let covered = dhk(3).run(&fam.seq).covered();
    assert_eq!(covered, 9);
    let opt = verify_certificate(&fam.seq, fam.opt_cert.as_ref().expect("certificate"))
        .expect("certificate checks");
    assert_eq!(opt, 12);
    assert_eq!(rat(covered as i64, opt as i64), rat(3, 4));

    pass(
        4,
        "two-border families: dnf 12 vs certified 17 at p=3; dh3 9 vs certified 12 (ratio 3/4)",
        t,
        BUDGET_TWO_BORDER,
    );
}

#[test]
fn criterion_05_worst_order_relations() {
    let _gate = serial();
    let t = Instant::now();

    // Exhaustive worst-order values over every multiset of at most 8
    // items with sizes in {1/2, 1/3, 1/4, 1/6}.
    let sizes = [rat(1, 2), rat(1, 3), rat(1, 4), rat(1, 6)];
    let mut multisets = 0u64;
    for_each_multiset(&sizes, 8, &mut |seq| {
        multisets += 1;
        let dnf_w = worst_value(&Algorithm::Dnf, seq);
        for k in [2u32, 3] {
            let dh_w = worst_value(&dhk(k), seq);
            assert!(
                dh_w + (k as u64 - 1) >= dnf_w,
                "worst-order lower relation failed: k={k} dh_w={dh_w} dnf_w={dnf_w} on {seq:?}"
            );
            assert!(
                2 * dh_w <= 3 * dnf_w + 2,
                "worst-order upper relation failed: k={k} dh_w={dh_w} dnf_w={dnf_w} on {seq:?}"
            );
        }
    });
    assert_eq!(multisets, 494, "all size-compositions up to 8 items were enumerated");

    // Pinned ratio on the scale-20 gap family. The single-bin worst
    // order is certified by the volume bound meeting the given order;
    // the class engine sees only two distinct sizes, one per class, so
    // its count is order-free (sampled orders double-check that).
    let fam = gen_rwor(20).expect("gap family generates");
    let bounds = dnf_worst_order_bounds(&fam.seq);
    assert_eq!(bounds.exact_value(), Some(40), "volume bound pins the dnf worst order");
    assert_eq!(dhk(2).run(&fam.seq).covered(), 59);
    let sampled = worst_order_value(
        &dhk(2),
        &fam.seq,
        &WorstOrderMode::Sampled { samples: 200, seed: SEED },
    )
    .expect("sampling runs")
    .covered();
    assert_eq!(sampled, 59, "class-engine count is the same on every sampled order");
    let ratio = rat(59, 40);
    assert!(rat(147, 100) < ratio && ratio < rat(3, 2));

    pass(
        5,
        "worst-order relations hold on all 494 small multisets; gap-family ratio is 59/40",
        t,
        BUDGET_WORST_ORDER,
    );
}

#[test]
fn criterion_06_stationary_distribution() {
    let _gate = serial();
    let t = Instant::now();
    let pi = markov_stationary(&MarkovChain::dnf_two_size()).expect("chain is irreducible");
    assert_eq!(pi, vec![rat(2, 5), rat(1, 5), rat(2, 5)]);
    pass(6, "two-size chain stationary vector is exactly (2/5, 1/5, 2/5)", t, BUDGET_STATIONARY);
}

#[test]
fn criterion_07_random_order_expectations() {
    let _gate = serial();
    let t = Instant::now();

    // Dual route: the quadratic dynamic program must equal the
    // arrangement-by-arrangement average on every split with l+s <= 9.
    for l in 0..=9u64 {
        for s in 0..=(9 - l) {
            let dp = exact_expected_dnf_two_size(l, s).expect("in range");
            let brute = exhaustive_expected_dnf_two_size(l, s).expect("in range");
            assert_eq!(dp, brute, "expectation routes disagree at l={l}, s={s}");
        }
    }

    // Large balanced split: expected ratio approaches 4/5.
    let expectation = exact_expected_dnf_two_size(5000, 5000).expect("in range");
    let opt = opt_two_size(5000, 5000);
    assert_eq!(opt, 5000);
    let ratio = rat_to_f64(&(expectation / Rat::from_integer(opt.into())));
    assert!(
        (ratio - 0.8).abs() < TWO_SIZE_RATIO_TOL,
        "dnf random-order ratio at 5000+5000 was {ratio}"
    );

    // The class engine pairs the large items and never fills a bin from
    // the small ones, on any order: floor(l/2) covered out of n/2.
    let seq = gen_two_size(TwoSizeOrder::Counts { l: 5000, s: 5000 }, None, SEED)
        .expect("two-size generates");
    for k in [2u32, 7] {
        let covered = dhk(k).run(&seq).covered();
        assert_eq!(covered, 2500, "dh{k} covers floor(l/2)");
        let r = covered as f64 / (opt as f64);
        assert!((r - 0.5).abs() < TWO_SIZE_DHK_TOL);
    }

    pass(
        7,
        "random order: DP equals brute-force averages through 9 items; 5000+5000 ratio near 4/5; class engine at 1/2",
        t,
        BUDGET_RANDOM_ORDER,
    );
}

#[test]
fn criterion_08_uniform_monte_carlo() {
    let _gate = serial();
    let t = Instant::now();
    let cases: [(Algorithm, f64, f64); 3] = [
        (Algorithm::Dnf, 0.735_76, UNIFORM_TOL_DNF),
        (dhk(2), 0.714_097, UNIFORM_TOL_DH2),
        (dhk(50), 0.710_132, UNIFORM_TOL_DH50),
    ];
    for (alg, pinned, tol) in cases {
        let report = run_uniform_experiment(&alg, 100_000, 20, SEED, Some(tol))
            .expect("experiment runs");
        assert!(report.passed, "{} uniform experiment failed: {:?}", alg.label(), report.summary);
        let mean = report.summary[0].actual;
        assert!(
            (mean - pinned).abs() < tol,
            "{} mean ratio {mean} vs pinned {pinned}",
            alg.label()
        );
        // The closed form itself agrees with the quoted decimal.
        let closed = report.summary[0].expected;
        assert!((closed - pinned).abs() < PINNED_DECIMAL_TOL);
    }
    pass(
        8,
        "uniform draws, n=100000 x 20 trials: dnf near 2/e, dh2 near 0.714097, dh50 near 0.710132",
        t,
        BUDGET_UNIFORM,
    );
}

#[test]
fn criterion_09_certified_analytic_identities() {
    let _gate = serial();
    let t = Instant::now();

    // mu(2) = e^2 - e, certified.
    let e = euler_e();
    let diff = mu(2).expect("in range").sub(&e.mul(&e).sub(&e));
    assert!(certified_small(&diff, CERTIFIED_DIGITS), "mu(2) vs e^2 - e");

    // The k=2 large-item term is exactly 1/2.
    let b2 = eru_dhk(2).expect("in range");
    let diff = b2.r_large.sub(&PrecReal::exact(rat(1, 2)));
    assert!(certified_small(&diff, CERTIFIED_DIGITS), "r_large(2) vs 1/2");

    // Dual route for the large-item term: the pi-based form must cancel
    // down to the plain rational 2(2 - 1/k - sum_{i<=k} 1/i^2).
    let sweep = eru_sweep(2, 50).expect("in range");
    for b in &sweep {
        let mut inv_squares = Rat::zero();
        for i in 1..=(b.k as i64) {
            inv_squares += rat(1, i * i);
        }
        let direct = (rat(2, 1) - rat(1, b.k as i64) - inv_squares) * rat(2, 1);
        let diff = b.r_large.sub(&PrecReal::exact(direct));
        assert!(certified_small(&diff, CERTIFIED_DIGITS), "large-item routes at k={}", b.k);
    }

    // Strict ordering: totals decrease in k and all sit below the
    // single-bin engine's 2/e.
    for w in sweep.windows(2) {
        assert!(
            w[0].total.sub(&w[1].total).strictly_above(&Rat::zero()),
            "totals must decrease: k={} -> k={}",
            w[0].k,
            w[1].k
        );
    }
    let dnf = eru_dnf();
    for b in &sweep {
        assert!(
            dnf.sub(&b.total).strictly_above(&Rat::zero()),
            "single-bin engine must dominate at k={}",
            b.k
        );
    }

    pass(
        9,
        "certified identities: mu(2)=e^2-e, r_large(2)=1/2, dual large-item routes to 25 digits, strict ordering",
        t,
        BUDGET_ANALYTIC,
    );
}

#[test]
fn criterion_10_minmin_ratios() {
    let _gate = serial();
    let t = Instant::now();

    let spec = IntervalSpec::new(rat(1, 3), rat(3, 5)).expect("valid interval");
    let report = minmin_ratio_dnf(&spec).expect("one border");
    assert_eq!(report.ratio, rat(15, 16));
    assert_eq!(report.p, Some(2));
    assert!(!report.no_border);

    let (dnf, dh) = minmin_unrestricted();
    assert!(dnf.ratio.is_one() && dh.ratio.is_one());
    assert!(dnf.no_border && dh.no_border);

    // At b = 1/(p-1) the analysis degenerates and must refuse.
    for (a, b) in [(rat(1, 3), rat(1, 1)), (rat(1, 4), rat(1, 2))] {
        let spec = IntervalSpec::new(a, b).expect("valid interval");
        assert!(matches!(minmin_ratio_dnf(&spec), Err(MeasureError::BoundaryB)));
        assert!(matches!(minmin_ratio_dhk(&spec), Err(MeasureError::BoundaryB)));
    }

    pass(
        10,
        "min/min: 15/16 on (1/3, 3/5); unrestricted 1 for both engines; boundary b rejected",
        t,
        BUDGET_MINMIN,
    );
}

#[test]
fn criterion_11_property_suites() {
    let _gate = serial();
    let t = Instant::now();

    // (a) Class-engine order independence, scoped to universes with no
    //     item below 1/k: there every class either takes a fixed number
    //     of items per bin or holds items of a single size, so the
    //     covered count is a function of the multiset alone. (With
    //     mixed sizes below 1/k this genuinely fails —
    //     {1/3 x3, 1/4 x4} under k=2 covers 2 or 1 depending on order —
    //     so the fallback class is deliberately excluded here.)
    let universes: [(u32, Vec<Rat>); 2] = [
        (2, vec![rat(1, 2), rat(3, 5), rat(3, 4)]),
        (3, vec![rat(1, 3), rat(2, 5), rat(1, 2), rat(2, 3)]),
    ];
    for (k, sizes) in &universes {
        let alg = dhk(*k);
        for_each_multiset(sizes, 8, &mut |seq| {
            let reference = alg.run(seq).covered();
            for_each_distinct_order(seq, &mut |order| {
                assert_eq!(
                    alg.run(order).covered(),
                    reference,
                    "order dependence under k={k} on {order:?}"
                );
            });
        });
        // Sampled shuffles well beyond the exhaustive range.
        let mut rng = stream_rng(SEED, *k as u64);
        for _ in 0..20 {
            let mut items: Vec<ItemSize> =
                (0..50).map(|_| item(&sizes[rng.gen_range(0..sizes.len())])).collect();
            let reference = alg.run(&Sequence::new(items.clone())).covered();
            for _ in 0..100 {
                items.shuffle(&mut rng);
                assert_eq!(alg.run(&Sequence::new(items.clone())).covered(), reference);
            }
        }
        // The documented counterexample outside the scoped universe.
        if *k == 2 {
            let mixed = Sequence::from_literals(&[
                "1/3", "1/3", "1/3", "1/4", "1/4", "1/4", "1/4",
            ])
            .expect("valid items");
            let grouped = alg.run(&mixed).covered();
            let interleaved = Sequence::from_literals(&[
                "1/4", "1/3", "1/4", "1/3", "1/4", "1/3", "1/4",
            ])
            .expect("valid items");
            assert_ne!(
                alg.run(&interleaved).covered(),
                grouped,
                "the fallback class is genuinely order-sensitive"
            );
        }
    }

    // (b) Growth bound dh_k <= (3/2) dnf + 1 per sequence, plus
    // (c) reasonable-trace validation for both engines, on 100000
    //     seeded random sequences.
    for i in 0..100_000u64 {
        let len = 1 + (derive_seed(SEED, i) % 12) as usize;
        let seq = gen_uniform(len, derive_seed(SEED ^ 0x5EED_FACE, i));
        let dnf_run = Algorithm::Dnf.run(&seq);
        let dnf = dnf_run.covered();
        for k in [2u32, 3] {
            let alg = dhk(k);
            let dh = alg.run(&seq).covered();
            assert!(
                2 * dh <= 3 * dnf + 2,
                "growth bound failed at i={i}, k={k}: dh={dh} dnf={dnf}"
            );
        }
        if i % 100 == 0 {
            let verdict = validate_reasonable(&seq, &dnf_run.trace, Algorithm::Dnf.max_open())
                .expect("trace parses");
            assert!(verdict.ok, "single-bin trace unreasonable at i={i}");
            let alg = dhk(3);
            let run = alg.run(&seq);
            let verdict =
                validate_reasonable(&seq, &run.trace, alg.max_open()).expect("trace parses");
            assert!(verdict.ok, "class trace unreasonable at i={i}");
        }
    }

    // (d) Oracle sandwich on 1000 random small instances:
    //     pairing certificate <= exact optimum <= floor(volume).
    for i in 0..1000u64 {
        let len = 1 + (derive_seed(SEED ^ 0x0DDC_0FFE, i) % 10) as usize;
        let seq = gen_uniform(len, derive_seed(SEED ^ 0xD15C_0B01, i));
        let cert = pairing_certificate(&seq);
        let claimed = verify_certificate(&seq, &cert).expect("pairing certificate is honest");
        assert_eq!(claimed, cert.claimed);
        let opt = opt_exact(&seq, &OptOptions::default()).expect("small search in budget");
        let volume_cap = opt_volume_bound(&seq).to_u64().expect("small volume");
        assert!(claimed <= opt, "certificate must not exceed the optimum at i={i}");
        assert!(opt <= volume_cap, "optimum must not exceed floor(volume) at i={i}");
    }

    pass(
        11,
        "order independence (scoped), growth bound on 100000 sequences, trace validation, oracle sandwich",
        t,
        BUDGET_PROPERTIES,
    );
}
