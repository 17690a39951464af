use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use rug::{Float, Rational};

/// Incremental Akiyama–Tanigawa state; `numbers[k]` is B_k with B_1 = +1/2
/// (the algorithm's native convention, fixed up in [`bernoulli`]).
struct Table {
    work: Vec<Rational>,
    numbers: Vec<Rational>,
}

impl Table {
    fn extend_to(&mut self, k: usize) {
        while self.numbers.len() <= k {
            let m = self.numbers.len();
            self.work.push(Rational::from((1u32, m as u32 + 1)));
            for j in (1..=m).rev() {
                let diff = Rational::from(&self.work[j - 1] - &self.work[j]);
                self.work[j - 1] = diff * j as u32;
            }
            self.numbers.push(self.work[0].clone());
        }
    }
}

fn table() -> &'static Mutex<Table> {
    static TABLE: OnceLock<Mutex<Table>> = OnceLock::new();
    TABLE.get_or_init(|| Mutex::new(Table { work: Vec::new(), numbers: Vec::new() }))
}

/// Exact Bernoulli number B_k with the convention B_1 = -1/2.
pub fn bernoulli(k: usize) -> Rational {
    let mut t = table().lock().expect("bernoulli table poisoned");
    t.extend_to(k);
    if k == 1 {
        Rational::from((-1, 2))
    } else {
        t.numbers[k].clone()
    }
}

/// `B_2, B_4, …, B_{2·count}` rounded to `bits`, cached per precision.
pub(crate) fn even_bernoulli_floats(count: usize, bits: u32) -> Arc<Vec<Float>> {
    static CACHE: OnceLock<Mutex<HashMap<u32, Arc<Vec<Float>>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    if let Some(v) = cache.lock().expect("cache poisoned").get(&bits) {
        if v.len() >= count {
            return Arc::clone(v);
        }
    }
    // Grow geometrically so repeated calls do not rebuild one entry at a time.
    let target = count.max(16).next_power_of_two();
    let values: Vec<Float> = (1..=target).map(|k| Float::with_val(bits, &bernoulli(2 * k))).collect();
    let values = Arc::new(values);
    cache.lock().expect("cache poisoned").insert(bits, Arc::clone(&values));
    values
}
