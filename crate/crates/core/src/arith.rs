//! Small number-theoretic helpers shared across the crate.

/// Greatest common divisor of two non-negative integers.
pub fn gcd(a: u64, b: u64) -> u64 {
    let (mut a, mut b) = (a, b);
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

/// Extended gcd over signed integers: returns (g, u, v) with u*a + v*b = g >= 0.
pub fn ext_gcd(a: i64, b: i64) -> (i64, i64, i64) {
    if b == 0 {
        if a < 0 {
            (-a, -1, 0)
        } else {
            (a, 1, 0)
        }
    } else {
        let (g, u, v) = ext_gcd(b, a.rem_euclid(b));
        (g, v, u - a.div_euclid(b) * v)
    }
}

/// The divisors of n, sorted ascending.
pub fn divisors(n: u64) -> Vec<u64> {
    assert!(n > 0);
    let mut small = Vec::new();
    let mut large = Vec::new();
    let mut d = 1;
    while d * d <= n {
        if n % d == 0 {
            small.push(d);
            if d != n / d {
                large.push(n / d);
            }
        }
        d += 1;
    }
    large.reverse();
    small.extend(large);
    small
}

/// sigma_1(n): sum of positive divisors.
pub fn sigma1(n: u64) -> u64 {
    divisors(n).iter().sum()
}

/// sigma_1(n) for all n in 0..len as a sieve; index 0 holds 0.
pub fn sigma1_sieve(len: usize) -> Vec<u64> {
    let mut s = vec![0u64; len];
    for d in 1..len {
        let mut m = d;
        while m < len {
            s[m] += d as u64;
            m += d;
        }
    }
    s
}

/// sigma_k(n) for small k.
pub fn sigma_k(n: u64, k: u32) -> u64 {
    divisors(n).iter().map(|d| d.pow(k)).sum()
}

pub fn is_squarefree(n: u64) -> bool {
    if n == 0 {
        return false;
    }
    let mut n = n;
    let mut p = 2;
    while p * p <= n {
        if n % p == 0 {
            n /= p;
            if n % p == 0 {
                return false;
            }
        }
        p += 1;
    }
    true
}

/// The index psi(N) = [SL2(Z) : Gamma_0(N)] = N * prod_{p|N} (1 + 1/p).
pub fn psi_index(n: u64) -> u64 {
    assert!(n > 0);
    let mut rest = n;
    let mut psi = 1u64;
    let mut p = 2;
    while p * p <= rest {
        if rest % p == 0 {
            let mut pk = 1;
            while rest % p == 0 {
                rest /= p;
                pk *= p;
            }
            psi *= pk + pk / p;
        }
        p += 1;
    }
    if rest > 1 {
        psi *= rest + 1;
    }
    psi
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn divisor_lists() {
        assert_eq!(divisors(1), vec![1]);
        assert_eq!(divisors(6), vec![1, 2, 3, 6]);
        assert_eq!(divisors(12), vec![1, 2, 3, 4, 6, 12]);
    }

    #[test]
    fn sigma_values() {
        assert_eq!(sigma1(6), 12);
        assert_eq!(sigma1(12), 28);
        let sieve = sigma1_sieve(100);
        for n in 1..100 {
            assert_eq!(sieve[n], sigma1(n as u64));
        }
    }

    #[test]
    fn squarefree_and_psi() {
        assert!(is_squarefree(210));
        assert!(!is_squarefree(12));
        assert_eq!(psi_index(2), 3);
        assert_eq!(psi_index(6), 12);
        assert_eq!(psi_index(6), psi_index(2) * psi_index(3));
    }

    #[test]
    fn ext_gcd_bezout() {
        for a in -20i64..20 {
            for b in -20i64..20 {
                let (g, u, v) = ext_gcd(a, b);
                assert_eq!(u * a + v * b, g);
                assert_eq!(g, gcd(a.unsigned_abs(), b.unsigned_abs()) as i64);
            }
        }
    }
}
