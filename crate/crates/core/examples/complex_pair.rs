//! Rotation-scaling system: rotating directions, the limit bound, and the oracle.
use rci_bounds::bounds::{alpha_c_inf, RotatingFrame, RotatingSupports};
use rci_bounds::oracle::c_sequence;
use rci_bounds::presets;
use rci_bounds::spectral::{decompose, rotating_direction};

fn main() {
    let sys = presets::rotating_box(1.1, 5.0);
    let spec = decompose(&sys.a, None).unwrap();
    let b = &spec.blocks[0];
    println!("rho={:.3} theta/pi={:?} period={:?}", b.rho, b.angle_rational, b.period);
    for l in 0..4 {
        println!("  psi^{l}_1 = {:?}", rotating_direction(b, 1, l).unwrap().as_slice());
    }
    let s = RotatingSupports::new(&sys, &RotatingFrame::from_block(b).unwrap()).unwrap();
    let inf = alpha_c_inf(&s).unwrap();
    println!("limit bound {inf:.6}");
    for f in [0.95, 1.05] {
        let r = c_sequence(&sys, f * inf, 60).unwrap();
        println!("  alpha = {f} x bound: first empty C_k at {:?}", r.first_empty);
    }
}
