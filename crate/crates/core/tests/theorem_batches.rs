use qil_core::theorems::{run_random_batch, tally, Outcome, TheoremId, DEFAULT_BATCH};
use qil_core::ToleranceProfile;

fn check(id: TheoremId, min_pass: usize) {
    let tol = ToleranceProfile::default();
    let verdicts = run_random_batch(id, DEFAULT_BATCH, 42, &tol);
    let t = tally(&verdicts);
    println!("{id}: {t:?}");
    for v in &verdicts {
        assert_ne!(v.outcome, Outcome::Fail, "{v:#?}");
    }
    assert!(t.pass >= min_pass, "{id}: only {} decided instances", t.pass);
}

#[test]
fn power_closure() {
    check(TheoremId::PowerClosure, 100);
}

#[test]
fn gcd_min() {
    check(TheoremId::GcdMin, 100);
}

#[test]
fn gcd_min_strict() {
    check(TheoremId::GcdMinStrict, 100);
}

#[test]
fn product() {
    check(TheoremId::Product, 100);
}

#[test]
fn nilpotent_sum() {
    check(TheoremId::NilpotentSum, 100);
}

#[test]
fn tensor() {
    check(TheoremId::Tensor, 100);
}

#[test]
fn tensor_strict() {
    check(TheoremId::TensorStrict, 100);
}

#[test]
fn strict_scaling() {
    check(TheoremId::StrictScaling, 90);
}

#[test]
fn strict_product_criterion() {
    check(TheoremId::StrictProductCriterion, 90);
}

#[test]
fn expansion_product() {
    check(TheoremId::ExpansionProduct, 100);
}

#[test]
fn expansion_sum() {
    check(TheoremId::ExpansionSum, 100);
}

#[test]
fn norm_limit() {
    check(TheoremId::NormLimit, 100);
}

#[test]
fn block_form() {
    check(TheoremId::BlockForm, 95);
}

#[test]
fn similarity_split() {
    check(TheoremId::SimilaritySplit, 90);
}

#[test]
fn kernel_upgrade() {
    check(TheoremId::KernelUpgrade, 90);
}

#[test]
fn power_bounded_upgrade() {
    check(TheoremId::PowerBoundedUpgrade, 90);
}

#[test]
fn independence() {
    check(TheoremId::Independence, 90);
}

#[test]
fn product_powers() {
    check(TheoremId::ProductPowers, 100);
}

#[test]
fn tensor_powers() {
    check(TheoremId::TensorPowers, 100);
}

#[test]
fn block_corollary() {
    check(TheoremId::BlockCorollary, 60);
}

#[test]
fn batches_are_deterministic() {
    let tol = ToleranceProfile::default();
    let a = run_random_batch(TheoremId::Tensor, 10, 7, &tol);
    let b = run_random_batch(TheoremId::Tensor, 10, 7, &tol);
    let key = |v: &Vec<qil_core::theorems::TheoremVerdict>| {
        v.iter().map(|x| (x.instance_digest.clone(), x.worst_residual)).collect::<Vec<_>>()
    };
    assert_eq!(key(&a), key(&b));
}
