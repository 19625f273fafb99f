//! Partition combinatorics: Grassmannian permutations, reduced words and
//! Bruhat-style reflections on fixed-point labels.

use ufschur::combinat::{lambda_to_w_a, lambda_to_w_c, reduced_word_a, reduced_word_bc, reflect_c, Partition, Root, StrictPartition};

fn main() -> ufschur::Result<()> {
    let lam = Partition::new(vec![4, 2, 1])?;
    println!("w_{lam} in S_8 = {}", lambda_to_w_a(&lam, 4, 8)?);
    println!("reduced word: {:?}", reduced_word_a(&lam, 4));

    let mu = StrictPartition::new(vec![6, 4, 3, 1])?;
    println!("signed w_{mu} = {}", lambda_to_w_c(&mu, 6)?);
    println!("reduced word: {:?}", reduced_word_bc(&mu));
    println!("s_(2 t_1) on {mu}: {}", reflect_c(&Root::from_pairs(&[(1, 2)]), &mu));
    Ok(())
}
