use mvlat::cli::a2_corpus;
use mvlat::words::alphabet_audit;

fn main() {
    let corpus = a2_corpus(11, 1000);
    let rep = alphabet_audit(&corpus).unwrap();
    println!(
        "lattices={} classes={} heads={:?}",
        rep.lattices, rep.distinct_classes, rep.head_classes
    );
    for (class, count, ex) in &rep.occurrences {
        println!("class {class}: {count} occurrences, first at {:?}: {}", ex, rep.dict.classes[*class]);
    }
}
