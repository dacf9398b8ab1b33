//! Alexandrov–Fenchel inequality and its equality case, checked exactly.

use mixedarea::mixed::{af_check, monotonicity_equality};
use mixedarea::rational::{format_rational, rat};
use mixedarea::Polytope;

fn main() -> mixedarea::Result<()> {
    let k = Polytope::cube(3, 0, 1)?;
    let l = Polytope::from_ints(&[&[0, 0, 0], &[1, 0, 0], &[0, 1, 0], &[0, 0, 1]], 3)?;
    let c = Polytope::cube(3, -1, 1)?;
    let r = af_check(&k, &l, std::slice::from_ref(&c))?;
    println!("V(K,L,C)^2 = {} >= V(K,K,C) V(L,L,C) = {}: {}", format_rational(&r.lhs), format_rational(&r.rhs), r.holds);

    let r = af_check(&k, &k.scale(&rat(3)), std::slice::from_ref(&c))?;
    println!("homothetic pair: equality={} proportional={:?}", r.equality, r.proportional);

    let m = monotonicity_equality(&l, &k, &[c.clone(), c])?;
    println!("monotonicity for L in K: equal={} support agreement={}", m.equal, m.support_agreement);
    Ok(())
}
