//! The cone order on a handful of points. With eps = 0 it is plain Pareto
//! dominance; as eps grows, points with a lopsided trade-off get dominated.
//!
//!     cargo run --example cone_order

use ppbnb::cone::apply_t_eps;
use ppbnb::{eps_dominates, filter_non_eps_dominated, ConeEps};

fn main() -> ppbnb::Result<()> {
    let points = vec![
        vec![0.0, 1.0],
        vec![0.02, 0.6],
        vec![0.3, 0.3],
        vec![0.6, 0.02],
        vec![1.0, 0.0],
    ];
    for eps in [0.0, 0.1, 0.5, 0.9] {
        let cone = ConeEps::new(eps)?;
        let tagged: Vec<(Vec<f64>, usize)> = points.iter().cloned().zip(0..).collect();
        let keep = filter_non_eps_dominated(&tagged, cone);
        println!("eps {eps:<3}: kept {:?}", keep.iter().map(|(_, i)| i).collect::<Vec<_>>());
    }
    let cone = ConeEps::new(0.5)?;
    println!("T_eps(0.3, 0.3) = {:?}", apply_t_eps(&points[2], cone)?);
    println!(
        "(0.3, 0.3) dominates (0.0, 1.0) at eps 0.5: {}",
        eps_dominates(&points[2], &points[0], cone)?
    );
    Ok(())
}
