use qflat_core::lattice::*;
use qflat_core::scalar::*;

fn main() {
    // scalar accel vs direct at M=N=4
    let params = make_lattice(4, 4).unwrap();
    let site = LatticeSite::new(&params, [2, 0, 0, 0]);
    let d = lattice_propagator_direct(&params, 1.0, &site);
    let a = lattice_propagator_accel(&params, 1.0, &site);
    println!("M=N=4: direct={d} accel={a}");

    // separate Delta (M) from eta/box (N): same Delta, growing N
    for (m, n) in [(4u32, 4u32), (4, 8), (4, 16), (2, 2), (2, 4), (2, 8), (2, 16), (8, 8), (8, 16)] {
        let params = make_lattice(m, n).unwrap();
        let k0 = (1.0f64 / params.delta).floor() as i64;
        let x0 = k0 as f64 * params.delta;
        let site = LatticeSite::new(&params, [k0, 0, 0, 0]);
        let lat = lattice_propagator_accel(&params, 1.0, &site).re;
        let cont = continuum_schwinger(1.0, [x0, 0.0, 0.0, 0.0]).unwrap();
        println!(
            "M={m:2} N={n:2} Delta={:.4} eta={:.4} box={:.2} x0={x0:.4}: lat={lat:.6} cont={cont:.6} rel={:+.4}",
            params.delta,
            params.eta,
            (2 * params.l) as f64 * params.delta,
            (lat - cont) / cont
        );
    }
}
