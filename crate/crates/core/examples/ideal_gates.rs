//! Ideal parity gates on two qubits and the parity measurement they enable.

use std::f64::consts::FRAC_PI_2;

use paritysim::effective::{ghz_target, parity_outcome_probabilities, pcf_unitary, pcp_unitary, plus_state, qubit_space};
use paritysim::qcore::{unitarity_deviation, CVector, StateVector, C64};

fn main() -> paritysim::Result<()> {
    let pcf = pcf_unitary(2, 0.0)?;
    println!("flip unitarity deviation: {:.1e}", unitarity_deviation(&pcf.matrix));
    let pcp = pcp_unitary(2, FRAC_PI_2)?;
    println!("phase gate diagonal: {:?}", pcp.matrix.diagonal().iter().map(|z| (z.re, z.im)).collect::<Vec<_>>());

    // |psi> (x) |0_P> with |psi> = (|00> + |01>)/sqrt2, then one flip
    let psi = StateVector::new(qubit_space(2)?, CVector::from_fn(4, |k, _| C64::from(if k < 2 { 1.0 } else { 0.0 })))?.normalized();
    let with_ancilla = CVector::from_fn(8, |k, _| if k % 2 == 0 { psi.data[k / 2] } else { C64::from(0.0) });
    let input = StateVector::new(pcf.space.clone(), with_ancilla)?;
    let p = parity_outcome_probabilities(&input)?;
    println!("parity measurement: even {:.3}, odd {:.3}", p[0], p[1]);
    let out = &pcf.matrix * &input.data;
    let excited: f64 = out.iter().skip(1).step_by(2).map(|z| z.norm_sqr()).sum();
    println!("ancilla excited after the flip: {excited:.3}");

    let plus = plus_state(4)?;
    let ghz = ghz_target(4)?;
    let u = pcp_unitary(4, FRAC_PI_2)?;
    let overlap = (ghz.data.adjoint() * (&u.matrix * &plus.data))[0].norm_sqr();
    println!("|<GHZ| U_PCP(pi/2) |+>^4|^2 = {overlap:.12}");
    Ok(())
}
