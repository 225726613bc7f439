//! The same pipeline in `f32`, checked against the `f64` results.

use weylcov::bounds::{theorem2_check, theorem3_check};
use weylcov::channels::{apply_tensor_id, decompose_prop7, decompose_two_pauli, WeylChannel};
use weylcov::linalg::{von_neumann_entropy, DensityMatrix};
use weylcov::minent::min_output_entropy;
use weylcov::weyl::{commutation_defect, mub_family};

#[test]
fn weyl_and_mub_in_f32() {
    assert!(commutation_defect::<f32>(5) < 1e-5);
    let fam = mub_family::<f32>(5).unwrap();
    assert!(fam.max_unbiasedness_defect() < 1e-5);
}

#[test]
fn lifted_depolarizing_entropy_in_f32() {
    let ch = WeylChannel::<f32>::depolarizing(2, 0.5).unwrap();
    let out = apply_tensor_id(&ch, &DensityMatrix::maximally_entangled(2)).unwrap();
    assert!((von_neumann_entropy(&out) - 1.073543).abs() < 1e-5);
}

#[test]
fn decompositions_in_f32() {
    let ch = WeylChannel::<f32>::new(2, vec![vec![0.7, 0.1], vec![0.1, 0.1]]).unwrap();
    let dec = decompose_prop7(&ch).unwrap();
    assert!((dec.c[0] - 0.4375).abs() < 1e-6);
    assert!(decompose_two_pauli(0.2f32).unwrap().corrected.residual() < 1e-5);
}

#[test]
fn bounds_agree_across_precisions() {
    let a = theorem2_check(2, 0.5f32, &DensityMatrix::maximally_entangled(2)).unwrap();
    let b = theorem2_check(2, 0.5f64, &DensityMatrix::maximally_entangled(2)).unwrap();
    assert!((a.margin as f64 - b.margin).abs() < 1e-5);
    let c = theorem3_check(0.25f32, &DensityMatrix::maximally_entangled(2)).unwrap();
    assert!((c.rhs - 0.562335).abs() < 1e-5);
}

#[test]
fn minimal_output_entropy_in_f32() {
    let ch = WeylChannel::<f32>::depolarizing(2, 0.5).unwrap();
    let r = min_output_entropy(&ch, 4, 0, 1e-6).unwrap();
    assert!((r.value - 0.562335).abs() < 1e-5);
}
