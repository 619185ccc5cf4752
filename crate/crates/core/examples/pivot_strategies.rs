// Building pivot orderings: serial families, within-line permutations,
// shifts, admissible transpositions and relabelings, with the provenance log
// that replays them.

use eberlein::pivot::{random_sg_ordering, OrderingOp};
use eberlein::{PivotOrdering, Result, SerialFamily};

fn pairs(o: &PivotOrdering) -> String {
    o.pairs().iter().map(|(i, j)| format!("({},{})", i + 1, j + 1)).collect::<Vec<_>>().join(" ")
}

pub fn run() -> Result<()> {
    let n = 4;
    for family in SerialFamily::ALL {
        println!("{:>16}: {}", family.name(), pairs(&PivotOrdering::serial(n, family, Vec::new())?));
    }

    // column j (1-based, j = 3..n) visits rows 1..j-1 in the order perms[j - 3];
    // row_reversed is the textbook row-cyclic order (1,2), (1,3), ...
    let perms = vec![vec![1, 0], vec![2, 0, 1]];
    let permuted = PivotOrdering::serial(n, SerialFamily::Column, perms)?;
    println!("column, permuted: {}", pairs(&permuted));

    let shifted = PivotOrdering::column(n)?.transform(OrderingOp::Shift(1))?;
    println!("column shifted:   {}", pairs(&shifted));
    let r = (0..shifted.len() - 1).find(|&r| shifted.is_admissible(r)).expect("(2,3) and (1,4) are neighbours");
    let swapped = shifted.transform(OrderingOp::Transpose(r))?;
    println!("transpose at {}:   {}", r + 1, pairs(&swapped));
    let relabeled = swapped.transform(OrderingOp::Permute(vec![3, 2, 1, 0]))?;
    println!("relabeled:        {}", pairs(&relabeled));
    println!("provenance:\n{}", relabeled.provenance().to_log());

    let sg = random_sg_ordering(6, 11, Some(8))?;
    println!("random generalized serial ordering for n = 6: {}", sg.provenance().describe());
    println!("  {}", pairs(&sg));
    println!("  shifts in its chain: {}", sg.provenance().shift_count());
    assert_eq!(sg.provenance().replay()?, sg);
    assert_eq!(PivotOrdering::from_text(&sg.to_text())?.pairs(), sg.pairs());

    match PivotOrdering::from_pairs(3, vec![(0, 1), (0, 1), (1, 2)]) {
        Err(e) => println!("rejected: {e}"),
        Ok(_) => unreachable!("duplicate pair accepted"),
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<()> {
    run()
}
