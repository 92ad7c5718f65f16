use quadint::algebra::build::{c, v};
use quadint::algebra::{rat, Polynomial, Var};
use quadint::catalog::{m_system_coefficients, AngularConvention, SystemContext};
use quadint::exec::Execution;
use quadint::radical::{HalfPowers, RadicalElement, RingContext};
use quadint::verifier::*;

fn ctx() -> SystemContext {
    SystemContext::build()
}

fn all_pass(rs: &[CheckResult]) -> bool {
    rs.iter().all(CheckResult::passed)
}

fn x2() -> Polynomial {
    v(Var::X).pow(2)
}

#[test]
fn involution_holds() {
    let rs = verify_involution(&ctx());
    assert_eq!(rs.len(), 3);
    assert!(all_pass(&rs), "{rs:#?}");
}

#[test]
fn involution_detects_perturbed_scalar_part() {
    let c = ctx();
    let m1 = &c.m1 + &RadicalElement::from_poly(&c.ring, x2());
    let bad = c.with_scalar_parts(m1, c.m2.clone());
    let rs = verify_involution(&bad);
    assert!(!rs[0].passed());
}

#[test]
fn involution_fails_with_literal_angular_momentum() {
    let rs = verify_involution(&SystemContext::with_convention(AngularConvention::Misprint));
    assert!(!all_pass(&rs));
}

#[test]
fn m_system_holds_and_detects_mutation() {
    let c = ctx();
    assert!(all_pass(&verify_m_system(&c)));
    let m1 = &c.m1 + &RadicalElement::from_poly(&c.ring, x2());
    let bad = c.with_scalar_parts(m1, c.m2.clone());
    assert!(!all_pass(&verify_m_system(&bad)));
}

#[test]
fn invariant_coordinate_holds_and_detects_mutation() {
    let c = ctx();
    assert!(all_pass(&verify_invariant_coordinate(&c)));
    let r2 = &(&x2() + &v(Var::Y).pow(2)) + &v(Var::Z).pow(2);
    let ring = RingContext::new(r2);
    let vbad = RadicalElement::s(&ring).mul_poly(&v(Var::W0));
    let mut bad = c.clone();
    bad.u = ring.u().clone();
    bad.ring = ring;
    bad.v = vbad;
    assert!(!all_pass(&verify_invariant_coordinate(&bad)));
}

#[test]
fn ode_reduction() {
    assert!(verify_ode_reduction().passed());
    assert!(!verify_ode_reduction_for(&HalfPowers::monomial(rat(1, 1), -2)).passed());
}

#[test]
fn rank_r_holds_and_detects_mutation() {
    let c = ctx();
    let r = verify_rank_r(&c);
    assert!(r.passed(), "{r:?}");
    let mut bad = c.clone();
    bad.characteristics.n1 = &bad.characteristics.n1 + &x2();
    assert!(!verify_rank_r(&bad).passed());
}

#[test]
fn functional_independence_and_commutator() {
    let c = ctx();
    assert!(verify_functional_independence(&c).passed());
    assert!(verify_killing_commutator(&c).passed());
    let mut bad = c.clone();
    bad.x2 = bad.x1.clone();
    assert!(!verify_functional_independence(&bad).passed());
    assert!(!verify_killing_commutator(&bad).passed());
}

#[test]
fn jacobian_determinant_term_count() {
    let det = momentum_jacobian_det(&ctx()).unwrap();
    assert_eq!(det.len(), 112);
}

#[test]
fn first_order_scan() {
    let sys = ctx();
    assert!(first_order_integral_scan(&sys, &default_scan_params()).passed());
    // Oracles: axisymmetric and z-only potentials.
    let (rank, ns) = killing_vector_nullspace(&(&x2() + &v(Var::Y).pow(2)));
    assert_eq!(ns.len(), 2);
    assert_eq!(rank, 4);
    let (_, ns) = killing_vector_nullspace(&(&v(Var::Z).pow(3) + &c(2)));
    assert_eq!(ns.len(), 3);
    let mut bad = sys.clone();
    bad.u = &x2() + &v(Var::Y).pow(2);
    assert!(!first_order_integral_scan(&bad, &default_scan_params()).passed());
}

#[test]
fn factorization() {
    let c = ctx();
    let r = verify_factorization(&c, &rat(9, 25)).unwrap();
    assert!(r.passed(), "{r:?}");
    assert!(verify_factorization(&c, &rat(1, 3)).is_err());
    let mut bad = c.clone();
    bad.u = &bad.u + &x2();
    assert!(!verify_factorization(&bad, &rat(9, 25)).unwrap().passed());
}

#[test]
fn scalar_ansatz_recovers_catalog() {
    let c = ctx();
    let sol = solve_scalar_ansatz(&c).unwrap();
    assert!(sol.check.passed(), "{:?}", sol.check);
    assert_eq!(sol.nullity, [0, 0]);
    let mut coeffs = m_system_coefficients();
    coeffs[0][0][0] = &coeffs[0][0][0] + &x2();
    assert_eq!(
        solve_scalar_ansatz_with(&c, &coeffs).unwrap_err(),
        AnsatzError::NoSolution(1)
    );
}

#[test]
fn report_is_ordered_and_deterministic() {
    let c = ctx();
    let fams = [CheckFamily::RankR, CheckFamily::OdeReduction, CheckFamily::KillingCommutator];
    let seq = run_report(&c, &fams, Execution::Sequential);
    let par = run_report(&c, &fams, Execution::Parallel);
    let names = |r: &VerificationReport| r.checks.iter().map(|c| c.name.clone()).collect::<Vec<_>>();
    assert_eq!(names(&seq), vec!["ode-reduction", "rank-r", "killing-commutator"]);
    assert_eq!(names(&seq), names(&par));
    assert!(seq.all_passed());
    assert_eq!(seq.fingerprint, par.fingerprint);
}

#[test]
fn family_parsing() {
    assert_eq!("m_system".parse::<CheckFamily>().unwrap(), CheckFamily::MSystem);
    assert!("nope".parse::<CheckFamily>().is_err());
    for f in CheckFamily::ALL {
        assert_eq!(f.name().parse::<CheckFamily>().unwrap(), f);
    }
}
