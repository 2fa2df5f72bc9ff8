use num_complex::Complex;
use qflat_core::interacting::*;
use qflat_core::lattice::*;
use qflat_core::scalar::*;
use rand::{Rng, SeedableRng};

fn main() {
    // 1) closed vs direct worst case scan
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
    let mut worst = (0.0f64, Complex::new(0.0, 0.0), 0i64, 0u32, 0u32);
    for (m, n) in [(1u32, 1u32), (1, 2), (2, 1), (2, 3), (3, 3)] {
        let params = make_lattice(m, n).unwrap();
        for _ in 0..20 {
            let mag = 10f64.powf(rng.gen_range(-1.0..1.0));
            let arg = rng.gen_range(-std::f64::consts::FRAC_PI_4..std::f64::consts::FRAC_PI_4);
            let b = Complex::from_polar(mag, arg);
            for k in params.axis_indices() {
                let closed = one_d_sum_closed(b, k, &params).unwrap();
                let direct = one_d_sum_direct(b, k, &params);
                let rel = (closed - direct).norm() / direct.norm().max(1e-300);
                if rel > worst.0 {
                    worst = (rel, b, k, m, n);
                }
            }
        }
    }
    println!("worst closed-vs-direct: rel={:e} B={} k={} M={} N={}", worst.0, worst.1, worst.2, worst.3, worst.4);
    // detail at the worst point
    let params = make_lattice(worst.3, worst.4).unwrap();
    let c = one_d_sum_closed(worst.1, worst.2, &params).unwrap();
    let d = one_d_sum_direct(worst.1, worst.2, &params);
    println!("  closed={c} direct={d} |direct|={}", d.norm());

    // 2) identity B diffs
    let id = [1.0, 0.0, 0.0, 1.0];
    let chk = gaussian_identity_check_b(&id, 2, &id).unwrap();
    println!("identity B (I, I): lhs={} rhs={} diff={:e}", chk.lhs, chk.rhs, chk.diff);
    let chk = gaussian_identity_check_b(&[1.0, 0.0, 0.0, 4.0], 2, &[1.0, 0.0, 0.0, 0.0]).unwrap();
    println!("identity B diag: lhs={} rhs={} diff={:e}", chk.lhs, chk.rhs, chk.diff);
    let chk = gaussian_identity_check_a(&[1.0, 0.0, 0.0, 2.0], 2, &[1.0, 1.0]).unwrap();
    println!("identity A diag: lhs={} rhs={} diff={:e}", chk.lhs, chk.rhs, chk.diff);

    // 3) s_zero vs bounds
    let params = make_lattice(2, 2).unwrap();
    println!(
        "s_zero={} paper-style-bound(4/pi^2)={}",
        s_zero(&params, 1.0),
        s_zero_lower_bound(&params, 1.0)
    );

    // 4) hermiticity pieces
    let m = ModelParams { coupling_l: 0.8, mass_scalar: 1.0, mass_dirac: 1.0 };
    let pts = [
        TubePoint { x: [0.3, 0.2, -0.1, 0.4], eps: 0.8 },
        TubePoint { x: [-0.2, 0.1, 0.3, 0.0], eps: 0.0 },
    ];
    let signs = [FieldSign::Minus, FieldSign::Plus];
    let reflected = [
        TubePoint { x: pts[1].x, eps: -pts[1].eps },
        TubePoint { x: pts[0].x, eps: -pts[0].eps },
    ];
    let rsigns = [signs[1].conjugate(), signs[0].conjugate()];
    let v = npoint_wightman(&pts, &signs, &[], &m).unwrap();
    let vr = npoint_wightman(&reflected, &rsigns, &[], &m).unwrap();
    println!("rho-field: v={} conj={} vr={}", v.value, v.value.conj(), vr.value);
    for (a, b) in [(0usize, 0usize), (0, 2), (1, 3)] {
        let v = npoint_wightman(&pts, &signs, &[a, b], &m).unwrap();
        let vr = npoint_wightman(&reflected, &rsigns, &[b, a], &m).unwrap();
        println!("dirac ({a},{b}): conj v={} vr={}", v.value.conj(), vr.value);
    }

    // 5) lattice vs continuum two-point at M=N=8
    let params = make_lattice(8, 8).unwrap();
    let x0 = 4.0 * params.delta;
    let mm = ModelParams { coupling_l: 1.0, mass_scalar: 1.0, mass_dirac: 1.0 };
    let pts2 = [[0.0; 4], [x0, 0.0, 0.0, 0.0]];
    let s2 = [FieldSign::Minus, FieldSign::Plus];
    let lat = npoint_schwinger(&pts2, &s2, &[0, 0], &mm, &SchwingerBackend::Lattice(params)).unwrap();
    let cont = npoint_schwinger(&pts2, &s2, &[0, 0], &mm, &SchwingerBackend::Continuum).unwrap();
    println!(
        "n2 lattice={} cont={} det_lat={} det_cont={} free_lat={} free_cont={}",
        lat.value, cont.value, lat.det_factor, cont.det_factor, lat.free_factor, cont.free_factor
    );
    // scalar propagators at the same point for reference
    let site = LatticeSite::new(&params, [4, 0, 0, 0]);
    println!(
        "scalar lattice={} continuum={}",
        lattice_propagator_accel(&params, 1.0, &site).re,
        continuum_schwinger(1.0, [x0, 0.0, 0.0, 0.0]).unwrap()
    );
    let dl = qflat_core::dirac::lattice_dirac_propagator_accel(&params, 1.0, &site).unwrap();
    let dc = qflat_core::dirac::continuum_dirac_schwinger(1.0, [x0, 0.0, 0.0, 0.0]).unwrap();
    println!("dirac lattice 00={} 22={} continuum 00={} 22={}", dl.0[0][0], dl.0[2][2], dc.0[0][0], dc.0[2][2]);
}
