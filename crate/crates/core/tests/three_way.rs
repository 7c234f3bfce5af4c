use toda_lift::integrate::uniform_times;
use toda_lift::oplift::{build_x, geodesic, initial_xdot, ExactGeodesic, OpState};
use toda_lift::sampling::{centered_state, couplings, rng, uniform_vec};
use toda_lift::{IntegratorConfig, TodaSystem};

fn sup_dq(a: &[Vec<f64>], b: &[Vec<f64>], n: usize) -> f64 {
    a.iter()
        .zip(b)
        .flat_map(|(x, y)| x[..n].iter().zip(&y[..n]).map(|(u, v)| (u - v).abs()))
        .fold(0.0, f64::max)
}

#[test]
fn toda_hamiltonian_and_exact_agree() {
    let cfg = IntegratorConfig::default();
    let times = uniform_times(10.0, 100);
    for n in 2..=4 {
        for seed in 0..5u64 {
            let mut r = rng(1000 * n as u64 + seed);
            let g = couplings(&mut r, n, 0.5, 2.0);
            let sys = TodaSystem::new(g.clone()).unwrap();
            let s = centered_state(&mut r, n, 1.0);
            let omega = uniform_vec(&mut r, n - 1, -1.0, 1.0);
            let toda = sys.trajectory(&s, &times, &cfg).unwrap();
            let op = OpState::from_toda(&s, omega, g).unwrap();
            let ham = geodesic(&op, &times, &cfg).unwrap();
            let geo = ExactGeodesic::new(&build_x(&op.q, &op.omega).unwrap(), &initial_xdot(&op).unwrap()).unwrap();
            let exact: Vec<Vec<f64>> = times.iter().map(|&t| geo.positions(t).unwrap()).collect();
            let d1 = sup_dq(&toda.states, &ham.states, n);
            let d2 = sup_dq(&toda.states, &exact, n);
            let d3 = sup_dq(&ham.states, &exact, n);
            assert!(d1 < 1e-6 && d2 < 1e-6 && d3 < 1e-6, "n={n} seed={seed}: {d1:e} {d2:e} {d3:e}");
        }
    }
}
