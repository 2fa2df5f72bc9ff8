use qflat_core::dirac::*;
use qflat_core::lattice::*;
use qflat_core::scalar::*;

fn main() {
    // accel vs direct at M=N=4
    let params = make_lattice(4, 4).unwrap();
    for k in [[1i64, 0, 0, 0], [2, 0, 0, 0], [2, 1, 0, 0]] {
        let site = LatticeSite::new(&params, k);
        let d = lattice_dirac_propagator(&params, 1.0, &site, InverseRoute::Analytic);
        let a = lattice_dirac_propagator_accel(&params, 1.0, &site).unwrap();
        println!(
            "M=N=4 k={k:?}: direct00={} accel00={} maxdiff={:e}",
            d.0[0][0],
            a.0[0][0],
            a.max_diff(&d)
        );
    }
    // scalar convergence table at snapped points
    for m in [2u32, 4, 8] {
        let params = make_lattice(m, m).unwrap();
        let kf = (1.0f64 / params.delta).floor() as i64;
        let kr = (1.0f64 / params.delta).round() as i64;
        for k0 in [kf, kr] {
            let x0 = k0 as f64 * params.delta;
            let site = LatticeSite::new(&params, [k0, 0, 0, 0]);
            let lat = lattice_propagator_accel(&params, 1.0, &site).re;
            let cont = continuum_schwinger(1.0, [x0, 0.0, 0.0, 0.0]).unwrap();
            println!(
                "scalar M=N={m} k0={k0} x0={x0:.4}: lat={lat:.6} cont={cont:.6} rel={:.4}",
                (lat - cont).abs() / cont.abs()
            );
        }
    }
    // dirac convergence at M=N=4 (direct route, trustworthy)
    for m in [2u32, 4] {
        let params = make_lattice(m, m).unwrap();
        let kf = (1.0f64 / params.delta).floor() as i64;
        let x0 = kf as f64 * params.delta;
        let site = LatticeSite::new(&params, [kf, 0, 0, 0]);
        let lat = lattice_dirac_propagator(&params, 1.0, &site, InverseRoute::Analytic);
        let cont = continuum_dirac_schwinger(1.0, [x0, 0.0, 0.0, 0.0]).unwrap();
        println!(
            "dirac M=N={m} k0={kf}: lat00={} cont00={} lat22={} cont22={} relmax={:.4}",
            lat.0[0][0],
            cont.0[0][0],
            lat.0[2][2],
            cont.0[2][2],
            lat.max_diff(&cont) / cont.max_norm()
        );
    }
    // and M=N=8 accel vs continuum with entries
    let params = make_lattice(8, 8).unwrap();
    let site = LatticeSite::new(&params, [4, 0, 0, 0]);
    let a = lattice_dirac_propagator_accel(&params, 1.0, &site).unwrap();
    println!("M=N=8 accel 00={} 11={} 22={} 33={}", a.0[0][0], a.0[1][1], a.0[2][2], a.0[3][3]);
}
