use std::collections::BTreeMap;

use mvlat::complex::lattice_complex;
use mvlat::diagram::layout;
use mvlat::geocode::CombPart;
use mvlat::minima::LatticeSpec;
use mvlat::words::{word_of, LetterDict};

fn main() {
    let table: Vec<(u64, u64, u64, &str)> = vec![
        (1, 1, 0, "0 3 2"),
        (2, 1, 1, "Az 2"),
        (3, 1, 0, "0 2 3 2"),
        (3, 2, 0, "Ax bx"),
        (3, 4, 0, "0 2 bx"),
        (3, 5, 0, "Ax 3 2"),
        (4, 1, 1, "0 bz 2"),
        (4, 3, 1, "0 apz 2"),
        (5, 1, 0, "0 3 3 2"),
        (5, 2, 0, "Az bx"),
        (5, 3, 0, "Apy 3 2"),
        (5, 4, 0, "0 4 bx"),
        (5, 6, 0, "0 3 bx"),
        (5, 7, 0, "Az 3 2"),
        (5, 8, 0, "Apy bx"),
        (5, 9, 0, "0 4 3 2"),
        (6, 1, 1, "0 bz 2"),
        (6, 5, 1, "0 cpz 2"),
    ];
    let mut dict = LetterDict::new();
    let mut map: BTreeMap<String, String> = BTreeMap::new();
    for (alpha, beta, gamma, word) in table {
        let comb = CombPart::new(alpha, beta, gamma, 2);
        let spec = LatticeSpec { a: 2, b: comb.b_of(6), n: comb.n_of(6, 6) };
        let c = lattice_complex(&spec).unwrap();
        let d = layout(&c).unwrap();
        let letters = word_of(&c, &d, &mut dict).unwrap().letters;
        let chars: Vec<char> = word.chars().filter(|c| !c.is_whitespace()).collect();
        if letters.len() != chars.len() {
            eprintln!(
                "LENGTH MISMATCH for ({alpha},{beta},{gamma}): table {:?} ({} chars) vs {} slabs",
                word,
                chars.len(),
                letters.len()
            );
            continue;
        }
        for (ch, l) in chars.into_iter().zip(letters) {
            let class = dict.classes[l].clone();
            if let Some(prev) = map.get(&ch.to_string()) {
                if prev != &class {
                    eprintln!("INCONSISTENT: {ch} -> {prev} vs {class}");
                }
            } else {
                map.insert(ch.to_string(), class);
            }
        }
    }
    println!("{}", serde_json::to_string_pretty(&map).unwrap());
}
