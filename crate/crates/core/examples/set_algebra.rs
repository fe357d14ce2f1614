//! Minkowski sums, support functions and Hausdorff distances on small unions.

use randset::convex_sets::*;

fn main() -> Result<(), GeometryError> {
    let square = ConvexCell::polytope(&[
        Vector::d2(0.0, 0.0),
        Vector::d2(1.0, 0.0),
        Vector::d2(1.0, 1.0),
        Vector::d2(0.0, 1.0),
    ])?;
    let dot = ConvexCell::point(Vector::d2(3.0, 0.0));
    let a = SetUnion::new(vec![square, dot])?;
    let b = SetUnion::single(ConvexCell::segment(Vector::d2(0.0, 0.0), Vector::d2(0.0, 2.0))?);

    let sum = minkowski_sum(&a, &b)?;
    println!("A ⊕ B has {} cells:\n{sum}", sum.len());

    for x in spread_directions(2, 4) {
        let lhs = support(&x, &sum);
        let rhs = support(&x, &a) + support(&x, &b);
        println!("s({:?}) = {lhs:.3} = {rhs:.3}", x.vector().coords());
    }

    let hull = SetUnion::single(convex_hull(&a)?);
    println!("H(A, co A) = {:.4}", hausdorff(&a, &hull)?);
    println!("H(A, B) = {:.4}", hausdorff(&a, &b)?);

    // Unbounded sets need a window.
    let ray = SetUnion::single(ConvexCell::ray(Vector::d2(1.0, 0.0))?);
    let tilted = SetUnion::single(ConvexCell::ray(Vector::from_angle(0.1))?);
    println!("H_5(ray, tilted ray) = {:.4}", hausdorff_windowed(&ray, &tilted, 5.0)?);
    println!("recession cone of A ⊕ ray: {:?}", recession_cone(&minkowski_sum(&a, &ray)?).cone());

    let text = sum.to_string();
    let back: SetUnion = text.parse()?;
    assert_eq!(back, sum);
    Ok(())
}
