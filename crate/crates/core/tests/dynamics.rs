use std::f64::consts::PI;

use quadint::catalog::singular_lines;
use quadint::dynamics::*;
use quadint::exec::Execution;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn system() -> SystemPotential {
    SystemPotential::new(0.25, 1.0, -1.0, 1e-10).unwrap()
}

fn norm(v: [f64; 3]) -> f64 {
    (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]).sqrt()
}

/// Random point at least `margin` away from both singular lines.
fn random_regular_point(rng: &mut ChaCha8Rng, pot: &SystemPotential, margin: f64) -> [f64; 3] {
    loop {
        let q = [rng.random_range(-2.0..2.0), rng.random_range(-2.0..2.0), rng.random_range(-2.0..2.0)];
        if pot.distance_to_singular_lines(q) > margin {
            return q;
        }
    }
}

fn integrate<F: ForceField>(force: &F, s0: PhaseState, t_end: f64, opts: AdaptiveOptions, mut each: impl FnMut(&PhaseState)) -> PhaseState {
    let mut rk = Dopri5::new(force, opts, &s0).unwrap();
    let mut s = s0;
    while s.t < t_end {
        let rem = t_end - s.t;
        let r = rk.step(&s, rem).unwrap();
        s = r.state;
        if r.h == rem {
            s.t = t_end;
        }
        each(&s);
    }
    s
}

#[test]
fn potential_at_origin() {
    let v = system().potential([0.0; 3]).unwrap();
    assert!((v + 16.0 / 27.0).abs() < 1e-15);
}

#[test]
fn gradient_matches_finite_differences() {
    let pot = system();
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let h = 1e-5;
    for _ in 0..100 {
        let q = random_regular_point(&mut rng, &pot, 0.2);
        let f = pot.force(q).unwrap();
        for i in 0..3 {
            let (mut qp, mut qm) = (q, q);
            qp[i] += h;
            qm[i] -= h;
            let fd = -(pot.potential(qp).unwrap() - pot.potential(qm).unwrap()) / (2.0 * h);
            let scale = norm(f).max(1e-12);
            assert!((f[i] - fd).abs() / scale < 1e-6, "q={q:?} i={i}: {} vs {fd}", f[i]);
        }
    }
}

#[test]
fn zero_coupling_has_no_force() {
    let pot = SystemPotential::new(0.25, 1.0, 0.0, 1e-10).unwrap();
    assert_eq!(pot.force([0.3, -0.2, 0.9]).unwrap(), [0.0; 3]);
}

#[test]
fn integrals_at_rest() {
    let pot = system();
    let q = [0.4, -0.3, 0.2];
    let [h, _, _] = pot.integrals(q, [0.0; 3]).unwrap();
    assert_eq!(h, pot.potential(q).unwrap());
    let [_, x1, x2] = pot.integrals([0.0; 3], [0.0; 3]).unwrap();
    assert!((x1 + 8.0 / 3.0).abs() < 1e-14);
    assert!((x2 + 5.0 / 3.0).abs() < 1e-14);
}

#[test]
fn singular_point_rejected() {
    let line = &singular_lines(0.25, 1.0).unwrap()[0];
    let q = line.at(0.4);
    assert!(matches!(system().force(q), Err(DynamicsError::SingularPoint { .. })));
    let cfg = SimConfig::default();
    assert!(matches!(simulate(&cfg, q, [0.1, 0.0, 0.0]), Err(DynamicsError::SingularPoint { .. })));
}

#[test]
fn distances() {
    let d0 = distance_to_singular_lines([0.0; 3], 0.25, 1.0).unwrap();
    assert!((d0 - 3.0 * 3f64.sqrt() / 4.0).abs() < 1e-14);
    for line in singular_lines(0.25, 1.0).unwrap() {
        assert!(distance_to_singular_lines(line.at(-1.7), 0.25, 1.0).unwrap() < 1e-14);
    }
    // dense sampling along the line agrees with the closed form
    let line = &singular_lines(0.25, 1.0).unwrap()[0];
    let sampled = (-20000..20000)
        .map(|k| norm(line.at(k as f64 * 1e-4)))
        .fold(f64::INFINITY, f64::min);
    assert!((sampled - d0).abs() < 1e-6);
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for _ in 0..50 {
        let q: [f64; 3] = std::array::from_fn(|_| rng.random_range(-3.0..3.0));
        let d = distance_to_singular_lines(q, 0.3, 1.5).unwrap();
        let dm = distance_to_singular_lines(q.map(|v| -v), 0.3, -1.5).unwrap();
        assert!((d - dm).abs() < 1e-12);
    }
}

#[test]
fn free_particle_exact() {
    let s0 = PhaseState::new(0.0, [0.1, -0.2, 0.3], [0.7, 0.25, -1.1]);
    let s = integrate(&FreeParticle, s0, 10.0, AdaptiveOptions::default(), |_| {});
    for i in 0..3 {
        let exact = s0.q[i] + s0.p[i] * 10.0;
        assert!((s.q[i] - exact).abs() <= 4.0 * f64::EPSILON * exact.abs().max(1.0), "{i}");
        assert_eq!(s.p[i], s0.p[i]);
    }
    let mut l = s0;
    for _ in 0..1000 {
        l = step_leapfrog(&FreeParticle, &l, 0.01).unwrap();
    }
    for i in 0..3 {
        assert!((l.q[i] - (s0.q[i] + s0.p[i] * 10.0)).abs() < 1e-12);
    }
}

#[test]
fn simulate_zero_coupling_is_straight() {
    let cfg = SimConfig { w0: 0.0, t_end: 10.0, sample_interval: 0.5, ..SimConfig::default() };
    let (q0, p0) = ([0.0, 0.0, 0.0], [0.3, 0.1, -0.2]);
    let (traj, out) = simulate(&cfg, q0, p0).unwrap();
    assert_eq!(out.classification, Classification::Completed);
    assert_eq!(traj.rows.len(), 21);
    for r in &traj.rows {
        for i in 0..3 {
            assert!((r.q[i] - p0[i] * r.t).abs() < 1e-14);
        }
    }
}

#[test]
fn oscillator_energy_adaptive() {
    let osc = IsotropicOscillator { omega: 1.0 };
    let s0 = PhaseState::new(0.0, [1.0, 0.0, 0.2], [0.0, 0.8, 0.0]);
    let e0 = osc.energy(s0.q, s0.p).unwrap();
    let mut worst = 0.0f64;
    let s = integrate(&osc, s0, 100.0 * 2.0 * PI, AdaptiveOptions::default(), |s| {
        worst = worst.max((osc.energy(s.q, s.p).unwrap() - e0).abs() / e0);
    });
    assert!(worst < 1e-9, "drift {worst:e}");
    // closed form after 100 periods
    assert!((s.q[0] - 1.0).abs() < 1e-8 && s.q[1].abs() < 1e-8);
}

#[test]
fn adaptive_local_order_five() {
    let pot = system();
    let s0 = PhaseState::new(0.0, [0.2, -0.1, 0.3], [0.1, 0.2, -0.1]);
    let errs: Vec<f64> = [0.08, 0.04, 0.02, 0.01]
        .iter()
        .map(|&h| dopri5_fixed_step(&pot, &s0, h).unwrap().1)
        .collect();
    for w in errs.windows(2) {
        let order = (w[0] / w[1]).log2();
        assert!((4.6..5.6).contains(&order), "observed order {order} from {errs:?}");
    }
    // same for the oscillator against its closed-form solution (local error h^6)
    let osc = IsotropicOscillator { omega: 1.0 };
    let s0 = PhaseState::new(0.0, [1.0, 0.0, 0.0], [0.0, 1.0, 0.0]);
    let local = |h: f64| {
        let (s, _) = dopri5_fixed_step(&osc, &s0, h).unwrap();
        ((s.q[0] - h.cos()).powi(2) + (s.q[1] - h.sin()).powi(2)).sqrt()
    };
    let order = (local(0.2) / local(0.1)).log2();
    assert!((5.5..6.5).contains(&order), "local error order {order}");
}

#[test]
fn leapfrog_reversible() {
    let pot = system();
    let s0 = PhaseState::new(0.0, [0.2, -0.1, 0.3], [0.1, 0.2, -0.1]);
    let mut s = s0;
    for _ in 0..1000 {
        s = step_leapfrog(&pot, &s, 1e-3).unwrap();
    }
    s.p = s.p.map(|v| -v);
    for _ in 0..1000 {
        s = step_leapfrog(&pot, &s, 1e-3).unwrap();
    }
    for i in 0..3 {
        assert!((s.q[i] - s0.q[i]).abs() < 1e-12);
        assert!((s.p[i] + s0.p[i]).abs() < 1e-12);
    }
}

#[test]
fn leapfrog_oscillator_no_secular_drift() {
    let osc = IsotropicOscillator { omega: 1.0 };
    let period = 2.0 * PI;
    let h = period / 500.0;
    let mut s = PhaseState::new(0.0, [1.0, 0.0, 0.3], [0.0, 0.7, 0.0]);
    let e0 = osc.energy(s.q, s.p).unwrap();
    let mut f = osc.force(s.q).unwrap();
    let n_periods = 10_000;
    let mut early = 0.0f64;
    let mut late = 0.0f64;
    for k in 0..n_periods * 500 {
        let (ns, nf) = leapfrog_with_force(&osc, &s, &f, h).unwrap();
        s = ns;
        f = nf;
        let e = ((osc.energy(s.q, s.p).unwrap() - e0) / e0).abs();
        if k < 100 * 500 {
            early = early.max(e);
        } else if k >= (n_periods - 100) * 500 {
            late = late.max(e);
        }
    }
    assert!(early < 1e-4, "{early}");
    assert!(late < 1.1 * early, "early {early:e}, late {late:e}");
}

#[test]
fn repulsive_runs_respect_the_analytic_bound() {
    let cfg = SimConfig { w0: 1.0, t_end: 50.0, sample_interval: 0.5, ..SimConfig::default() };
    let pot = cfg.potential().unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for _ in 0..20 {
        let q = random_regular_point(&mut rng, &pot, 0.05);
        let p: [f64; 3] = std::array::from_fn(|_| rng.random_range(-1.0..1.0));
        let e = pot.energy(q, p).unwrap();
        let (_, out) = simulate_with(&pot, &cfg, q, p, false).unwrap();
        let bound = (cfg.w0 / e).powi(2);
        assert!(out.min_u >= bound * (1.0 - 1e-6), "min_u {} < {bound}", out.min_u);
        assert_ne!(out.classification, Classification::SingularityApproach);
    }
}

#[test]
fn trajectory_rows_and_energy_identity() {
    let cfg = SimConfig { t_end: 20.0, sample_interval: 0.25, ..SimConfig::default() };
    let (q0, p0) = BOUNDED_INITIAL_CONDITIONS[1];
    let (traj, out) = simulate(&cfg, q0, p0).unwrap();
    assert_eq!(out.classification, Classification::Completed);
    assert_eq!(traj.rows.len(), 81);
    assert_eq!(traj.rows[0].q, q0);
    assert_eq!([traj.rows[0].h, traj.rows[0].x1, traj.rows[0].x2], out.initial);
    assert!(traj.rows.windows(2).all(|w| w[1].t > w[0].t));
    assert_eq!(traj.rows.last().unwrap().t, 20.0);
    let pot = cfg.potential().unwrap();
    for r in &traj.rows {
        let h = pot.energy(r.q, r.p).unwrap();
        assert!((h - r.h).abs() < 1e-12 * (1.0 + r.h.abs()));
    }
}

#[test]
fn leapfrog_simulation_completes() {
    let cfg = SimConfig { integrator: Integrator::Leapfrog, step: 1e-3, t_end: 20.0, ..SimConfig::default() };
    let (q0, p0) = BOUNDED_INITIAL_CONDITIONS[2];
    let (traj, out) = simulate(&cfg, q0, p0).unwrap();
    assert_eq!(out.classification, Classification::Completed);
    assert_eq!(traj.rows.len(), 201);
    assert!(out.max_drift[0] < 1e-4, "{:?}", out.max_drift);
}

#[test]
fn csv_round_trip() {
    let cfg = SimConfig { t_end: 2.0, ..SimConfig::default() };
    let (q0, p0) = BOUNDED_INITIAL_CONDITIONS[0];
    let (traj, _) = simulate(&cfg, q0, p0).unwrap();
    let mut buf = Vec::new();
    write_trajectory(&mut buf, &traj).unwrap();
    let text = String::from_utf8(buf.clone()).unwrap();
    assert!(text.starts_with("t,x,y,z,px,py,pz,H,X1,X2,u,d_sing\n"));
    assert_eq!(read_trajectory(buf.as_slice()).unwrap(), traj);
    let bad = "t,x,y\n0,1,2\n";
    assert!(matches!(read_trajectory(bad.as_bytes()), Err(DynamicsError::MalformedInput(_))));
}

#[test]
fn scan_table() {
    let cfg = SimConfig { t_end: 5.0, ..SimConfig::default() };
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let pot = cfg.potential().unwrap();
    let ics: Vec<_> = (0..10)
        .map(|_| (random_regular_point(&mut rng, &pot, 0.3), [0.05, -0.02, 0.01]))
        .collect();
    let seq = scan_singularity(&cfg, &ics, Execution::Sequential).unwrap();
    let par = scan_singularity(&cfg, &ics, Execution::Parallel).unwrap();
    assert_eq!(seq.len(), 10);
    assert_eq!(seq, par);
    assert!(seq.iter().all(|r| r.min_u.is_finite()));
    assert!(seq.iter().enumerate().all(|(i, r)| r.idx == i));
    assert!(scan_singularity(&cfg, &[], Execution::Parallel).unwrap().is_empty());
    let pos = SimConfig { w0: 0.5, ..cfg.clone() };
    assert_eq!(scan_singularity(&pos, &ics, Execution::Parallel), Err(DynamicsError::ScanDomain(0.5)));
    let mut buf = Vec::new();
    write_scan_table(&mut buf, &seq).unwrap();
    let text = String::from_utf8(buf).unwrap();
    assert!(text.starts_with("idx,x0,y0,z0,px0,py0,pz0,E,min_u,min_dsing,class\n"));
    assert_eq!(text.lines().count(), 11);
}

#[test]
fn invalid_configs() {
    let bad = SimConfig { rel_tol: 0.0, ..SimConfig::default() };
    assert!(matches!(bad.validate(), Err(DynamicsError::InvalidConfig(_))));
    let bad = SimConfig { a: 0.7, ..SimConfig::default() };
    assert!(matches!(bad.validate(), Err(DynamicsError::Domain(_))));
    assert_eq!("rk45".parse::<Integrator>().unwrap(), Integrator::Adaptive);
    assert!("euler".parse::<Integrator>().is_err());
}
