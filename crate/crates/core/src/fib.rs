//! Fibonacci and Lucas numbers with `F_1 = F_2 = 1`.

use num_bigint::BigUint;
use num_traits::{One, Zero};

/// `F_n` for `n >= 0` (`F_0 = 0`).
pub fn fib(n: u32) -> BigUint {
    let (mut a, mut b) = (BigUint::zero(), BigUint::one());
    for _ in 0..n {
        let next = &a + &b;
        a = std::mem::replace(&mut b, next);
    }
    a
}

/// `L_n = F_{n-1} + F_{n+1}` for `n >= 1`.
pub fn lucas(n: u32) -> BigUint {
    assert!(n >= 1);
    fib(n - 1) + fib(n + 1)
}

/// Memoised table `F_0..=F_max`.
#[derive(Clone, Debug)]
pub struct FibTable {
    values: Vec<BigUint>,
}

impl FibTable {
    pub fn new(max: u32) -> Self {
        let mut values = Vec::with_capacity(max as usize + 1);
        values.push(BigUint::zero());
        values.push(BigUint::one());
        while values.len() <= max as usize {
            let n = values.len();
            let next = &values[n - 1] + &values[n - 2];
            values.push(next);
        }
        values.truncate(max as usize + 1);
        FibTable { values }
    }

    pub fn get(&self, n: u32) -> BigUint {
        self.values
            .get(n as usize)
            .cloned()
            .unwrap_or_else(|| fib(n))
    }
}
