use qflat_core::lattice::*;
use qflat_core::scalar::*;

fn main() {
    let x_req = 1.0f64;
    for (name, snap) in [
        ("floor", 0u8),
        ("round", 1),
        ("ceil", 2),
    ] {
        println!("== snap = {name}");
        for m in [2u32, 4, 8, 16] {
            let params = make_lattice(m, m).unwrap();
            let t = x_req / params.delta;
            let k0 = match snap {
                0 => t.floor() as i64,
                1 => t.round() as i64,
                _ => t.ceil() as i64,
            }
            .max(1);
            let x0 = k0 as f64 * params.delta;
            let site = LatticeSite::new(&params, [k0, 0, 0, 0]);
            let lat = lattice_propagator_accel(&params, 1.0, &site).re;
            let cont = continuum_schwinger(1.0, [x0, 0.0, 0.0, 0.0]).unwrap();
            println!(
                "  M=N={m:2} k0={k0:2} x0={x0:.4}: lat={lat:.6} cont={cont:.6} rel={:+.4}",
                (lat - cont) / cont
            );
        }
    }
    // request x0 = 2 for reference
    println!("== x_req = 2, floor");
    for m in [2u32, 4, 8] {
        let params = make_lattice(m, m).unwrap();
        let k0 = (2.0 / params.delta).floor() as i64;
        let x0 = k0 as f64 * params.delta;
        let site = LatticeSite::new(&params, [k0, 0, 0, 0]);
        let lat = lattice_propagator_accel(&params, 1.0, &site).re;
        let cont = continuum_schwinger(1.0, [x0, 0.0, 0.0, 0.0]).unwrap();
        println!(
            "  M=N={m:2} k0={k0:2} x0={x0:.4}: rel={:+.4}",
            (lat - cont) / cont
        );
    }
}
