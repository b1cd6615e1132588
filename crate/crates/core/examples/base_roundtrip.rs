//! The base scheme with eight message bits: keys, a quantum public key,
//! a classical ciphertext, decryption.

use qpke::base::{BaseCiphertext, BaseParams, BaseScheme};
use qpke::wire::Wire;
use qpke::{Profile, Qpke};
use qsim::{bits, DetRng};

fn main() {
    let p = Profile::toy();
    let scheme = BaseScheme::new(BaseParams { sig: p.sig, u: p.u }, 8);
    let mut rng = DetRng::from_seed(1);
    let (sk, vk) = scheme.skgen(&mut rng);
    let pk = scheme.pkgen(&sk, &mut rng);
    println!(
        "slot 0: r = {}, {} terms over {} qubits",
        pk[0].r,
        pk[0].state.support_size(),
        pk[0].state.width()
    );

    let msg = bits("10110001");
    let ct = scheme.enc(&vk, pk, &msg, &mut rng).unwrap();
    if let BaseCiphertext::Present { d, .. } = &ct[0] {
        println!("slot 0: |d| = {} bits", d.len());
    }
    println!("ciphertext {} bytes on the wire", ct.to_wire().len());
    println!("decrypts to {}", scheme.dec(&sk, &ct).unwrap());
}
