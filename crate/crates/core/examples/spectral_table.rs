//! Eigen-directions of the unstable example and the support values along them.
use rci_bounds::cli::support_table;
use rci_bounds::presets;
use rci_bounds::spectral::decompose;

fn main() {
    let sys = presets::unstable_example();
    let spec = decompose(&sys.a, None).expect("diagonalizable");
    for b in &spec.blocks {
        println!("{:?} lambda={:.4} phi1={:.5?}", b.kind, b.lambda, b.phi[0].as_slice());
    }
    println!("{:>6} {:>9} {:>9} {:>9} {:>9}", "block", "h_X", "h_-BU(+)", "h_-BU(-)", "h_W");
    for r in support_table(&sys, &spec).expect("supports") {
        println!("{:>6} {:>9.3} {:>9.3} {:>9.3} {:>9.3}", r.block, r.hx_plus, r.hbu_plus, r.hbu_minus, r.hw_plus);
    }
}
