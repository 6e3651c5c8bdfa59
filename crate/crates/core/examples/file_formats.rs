//! Write a model in the native text format and as a UAI MARKOV network,
//! then read both back.

use mapmp::io::{emit_model, emit_uai, load_model, parse_uai};
use mapmp::random_tree_potts;

fn main() -> mapmp::Result<()> {
    let model = random_tree_potts(4, 2, 9)?;

    let native = emit_model(&model);
    print!("{native}");
    assert_eq!(load_model(&native)?, model);

    let uai = emit_uai(&model);
    println!("{}", uai.lines().take(8).collect::<Vec<_>>().join("\n"));
    let back = parse_uai(&uai)?;
    let worst = (0..model.m())
        .flat_map(|e| back.edge_cost(e).iter().zip(model.edge_cost(e)).map(|(a, b)| (a - b).abs()).collect::<Vec<_>>())
        .fold(0.0, f64::max);
    println!("largest UAI cost difference: {worst:e}");

    match parse_uai("MARKOV\n3\n2 2 2\n1\n3 0 1 2\n8\n1 1 1 1 1 1 1 1\n") {
        Err(e) => println!("rejected: {e}"),
        Ok(_) => unreachable!(),
    }
    Ok(())
}
