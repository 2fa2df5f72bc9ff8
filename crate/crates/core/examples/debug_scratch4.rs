use num_complex::Complex;
use qflat_core::lattice::*;
use qflat_core::reduce::pairwise_sum;
use qflat_core::scalar::*;
use qflat_core::C64;

// direct 4D sum at arbitrary real x
fn direct_at_real_x(params: &LatticeParams, m: f64, x: [f64; 4]) -> C64 {
    let measure = params.eta.powi(4) / (2.0 * std::f64::consts::PI).powi(4);
    let term = |flat: usize| {
        let k = params.unflatten(flat);
        let p = MomentumPoint { k };
        let mom = p.momentum(params);
        let phase: f64 = (0..4).map(|mu| mom[mu] * x[mu]).sum();
        Complex::from_polar(1.0, phase) / scalar_symbol(&p, m, params)
    };
    pairwise_sum::<C64, _>(params.volume(), &term) * measure
}

fn main() {
    let x = [1.0, 0.0, 0.0, 0.0];
    let cont = continuum_schwinger(1.0, x).unwrap();
    println!("continuum at x=(1,0,0,0): {cont:.6}");
    for m in [2u32, 4, 8] {
        let params = make_lattice(m, m).unwrap();
        let t0 = std::time::Instant::now();
        let lat = direct_at_real_x(&params, 1.0, x);
        println!(
            "M=N={m}: lat={:.6}{:+.2e}i rel={:+.4}  ({:.2?})",
            lat.re,
            lat.im,
            (lat.re - cont) / cont,
            t0.elapsed()
        );
    }
    // also x with spatial part
    let x2 = [1.0, 0.5, 0.0, 0.0];
    let cont2 = continuum_schwinger(1.0, x2).unwrap();
    println!("continuum at x=(1,0.5,0,0): {cont2:.6}");
    for m in [2u32, 4, 8] {
        let params = make_lattice(m, m).unwrap();
        let lat = direct_at_real_x(&params, 1.0, x2);
        println!("M=N={m}: lat={:.6} rel={:+.4}", lat.re, (lat.re - cont2) / cont2);
    }
}
