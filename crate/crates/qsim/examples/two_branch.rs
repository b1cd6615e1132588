//! A two-branch state over wide registers: coherent evaluation, Hadamard
//! sampling, and the exact outcome law checked against the dense reference.

use qsim::dense::dense_distribution;
use qsim::{bits, BitString, Complex64, DetRng, Measurement, RegisterLayout, SparseState};

fn main() -> Result<(), qsim::QsimError> {
    let layout = RegisterLayout::new(&[("A", 1), ("B", 5)])?;
    let h = Complex64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
    let x0 = bits("001101");
    let x1 = bits("110011");
    let st = SparseState::superpose(layout, [(x0.clone(), h), (x1.clone(), h)])?;
    print!("{}", st.dump_text());

    // Parity of B into a fresh one-qubit register.
    let st2 = st
        .add_register("P", 1)?
        .coherent_eval(&["B"], "P", |b| BitString::from_bits([b.count_ones() % 2 == 1]))?;
    println!("with parity register: {} terms over {} qubits", st2.support_size(), st2.width());

    let mut rng = DetRng::from_seed(1);
    let diff = x0.xor(&x1)?;
    for _ in 0..5 {
        let (d, _) = st.measure_hadamard(&["A", "B"], &mut rng)?;
        println!("d = {d}, d·(x0⊕x1) = {}", d.dot(&diff)? as u8);
    }

    let sparse = st.exact_distribution(Measurement::Hadamard, &["A", "B"])?;
    let dense = dense_distribution(&st, Measurement::Hadamard, &["A", "B"])?;
    println!(
        "{} outcomes, max |sparse - dense| = {:.1e}",
        sparse.len(),
        sparse.max_abs_diff(&dense)
    );
    Ok(())
}
