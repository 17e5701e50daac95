use hurwitz::algebra::Partition;
use hurwitz::search::{search_with, P1Fp, PointSpec, SearchOptions, SearchProblem};

fn main() {
    let shape = Partition::new(vec![4, 3, 2, 2, 2]).unwrap();
    let problem = SearchProblem {
        prime: 11,
        degree: 13,
        shapes: vec![shape.clone(), shape.clone(), shape],
        points: vec![
            PointSpec::Specified(P1Fp::Infinity),
            PointSpec::Specified(P1Fp::Finite(0)),
            PointSpec::Free,
        ],
    };
    let mut hits = 0;
    search_with(&problem, &SearchOptions::default(), |s| {
        let j = serde_json::to_string(&s).unwrap();
        // W1 = (x-5)^3 (x^3+3x^2+2x+3)^2, W2 = x^4 (x+3)^3 (x^3-3x-5)^2, λ=-4≡7, Q3=1
        if j.contains(r#""coeffs":[6,1]},"multiplicity":3"#)
            && j.contains(r#""coeffs":[3,2,3,1]},"multiplicity":2"#)
            && j.contains(r#""coeffs":[0,1]},"multiplicity":4"#)
            && j.contains(r#""coeffs":[3,1]},"multiplicity":3"#)
            && j.contains(r#""coeffs":[6,8,0,1]},"multiplicity":2"#)
            && s.lambda == 7
            && s.points[2] == P1Fp::Finite(1)
        {
            hits += 1;
            println!("GOLDEN FOUND: {j}");
        }
        true
    })
    .unwrap();
    println!("hits = {hits}");
}
