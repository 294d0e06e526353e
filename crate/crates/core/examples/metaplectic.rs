//! The metaplectic double cover of SL2(Q_3): Kubota cocycle, the splitting
//! over SL2(Z_3) and coset decomposition.

use metazeta::exactnum::{KElement, PadicContext};
use metazeta::metaplectic::{cocycle, coset_decompose, kubota_split, MetaElement, SL2Element};

fn main() -> metazeta::Result<()> {
    let ctx = PadicContext::new(3)?;
    let g = SL2Element::from_ints(ctx, [2, 1, 3, 2])?;
    let h = SL2Element::from_ints(ctx, [1, 0, 6, 1])?;
    let w = SL2Element::w(ctx);
    let t = SL2Element::diag(&KElement::from_int(ctx, 3))?;

    println!("sigma(g, h) = {}", cocycle(&g, &h));
    println!("sigma(w, w) = {}", cocycle(&w, &w));
    println!("sigma(t, w) = {}", cocycle(&t, &w));
    println!(
        "s(g) = {}, s(h) = {}, s(gh) = {}",
        kubota_split(&g)?,
        kubota_split(&h)?,
        kubota_split(&g.mul(&h))?
    );

    let x = MetaElement::new(SL2Element::from_ints(ctx, [1, 0, 1, 1])?.mul(&t), -1);
    let d = coset_decompose(&x);
    println!("x = {x}");
    println!("  = [{}] n({}) diag(3^{}, 3^-{})", d.h, d.t, d.n, d.n);
    let back = d
        .lifted_h(x.eps())
        .mul(&MetaElement::new(d.representative(), 1));
    println!("recomposed equals x: {}", back == x);

    let ww = MetaElement::w(ctx).mul(&MetaElement::w(ctx));
    println!("w^2 = {ww}");
    Ok(())
}
