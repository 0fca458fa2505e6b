//! Checks Peirce's law with simple types, embeds the derivation in the
//! intersection-union system and round-trips it through a certificate.

use lammu::grammar::parse_judgment;
use lammu::iu_types::{check_derivation, from_certificate, to_certificate};
use lammu::simple_types::{check_simple, embed_in_iu, SimpleJudgment};

fn main() {
    let r = parse_judgment("|- \\x. mu a.[a] x (\\y. mu b.[a] y) : ((A -> B) -> A) -> A |").unwrap();
    let j = SimpleJudgment::new(r.gamma, r.term, r.ty, r.delta);
    let d = check_simple(&j).expect("Peirce's law is derivable");
    print!("{}", d.render());

    let iu = embed_in_iu(&d);
    let cert = to_certificate(&iu);
    let back = from_certificate(&cert).unwrap();
    check_derivation(&back).unwrap();
    assert_eq!(back, iu);
    println!("certificate: {} bytes, {} nodes, verified", cert.len(), back.size());
}
