use parsum::multipoly::{default_names, TRat};
use parsum_cli::parse::parse_expression;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn atom(rng: &mut ChaCha8Rng, names: &[String]) -> String {
    match rng.gen_range(0..4) {
        0 => rng.gen_range(-9i64..=9).to_string(),
        1 => "x".into(),
        _ => names[rng.gen_range(0..names.len())].clone(),
    }
}

fn expr(rng: &mut ChaCha8Rng, names: &[String], depth: u32) -> String {
    if depth == 0 {
        return atom(rng, names);
    }
    let a = expr(rng, names, depth - 1);
    let b = expr(rng, names, depth - 1);
    match rng.gen_range(0..6) {
        0 => format!("({}) + ({})", a, b),
        1 => format!("({}) - ({})", a, b),
        2 => format!("({}) * ({})", a, b),
        3 => format!("({})^{}", a, rng.gen_range(0..3)),
        4 => format!("-({})", a),
        // keep denominators away from zero
        _ => format!("({}) / ({} + 1)", a, names[0]),
    }
}

#[test]
fn print_then_parse_is_identity() {
    let mut rng = ChaCha8Rng::seed_from_u64(17);
    for n in 1..=3 {
        let names = default_names(n);
        let custom: Vec<String> = (0..n).map(|i| format!("u_{}", i)).collect();
        let mut done = 0;
        while done < 70 {
            let depth = rng.gen_range(1..4);
            let vars = if rng.gen_bool(0.5) { &names } else { &custom };
            let text = expr(&mut rng, vars, depth);
            let v: TRat = parse_expression(&text, vars).unwrap_or_else(|e| panic!("{}: {}", text, e));
            let printed = v.display_with(vars).to_string();
            let back = parse_expression(&printed, vars).unwrap_or_else(|e| panic!("{} -> {}: {}", text, printed, e));
            assert_eq!(back, v, "{} -> {}", text, printed);
            done += 1;
        }
    }
}
