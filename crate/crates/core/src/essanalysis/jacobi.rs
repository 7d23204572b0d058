use crate::diffpoly::{Order, OrderMatrix};

/// Maximal diagonal sum over `k×k` submatrices, `k = min(rows, cols)`,
/// with `NegInf` entries forbidden. Solved as an assignment problem.
pub fn jacobi_number(a: &OrderMatrix) -> Order {
    jacobi_of(&a.entries)
}

pub(crate) fn jacobi_of(a: &[Vec<Order>]) -> Order {
    let r = a.len();
    let c = a.first().map_or(0, Vec::len);
    if r == 0 || c == 0 {
        return Order::Finite(0);
    }
    let n = r.max(c);
    let abs_sum: i64 = a.iter().flatten().filter_map(|o| o.finite()).map(i64::abs).sum();
    let forbidden = 2 * abs_sum + 1;
    let mut cost = vec![vec![0i64; n + 1]; n + 1];
    for i in 0..r {
        for j in 0..c {
            cost[i + 1][j + 1] = match a[i][j] {
                Order::Finite(w) => -w,
                Order::NegInf => forbidden,
            };
        }
    }
    let assign = hungarian(&cost, n);
    let mut total = 0;
    for (j, &i) in assign.iter().enumerate().skip(1) {
        if i == 0 || i > r || j > c {
            continue;
        }
        match a[i - 1][j - 1] {
            Order::Finite(w) => total += w,
            Order::NegInf => return Order::NegInf,
        }
    }
    Order::Finite(total)
}

/// Minimum-cost perfect assignment on a 1-indexed `n×n` cost matrix.
/// Returns `p` with `p[j]` the row assigned to column `j`.
fn hungarian(cost: &[Vec<i64>], n: usize) -> Vec<usize> {
    const INF: i64 = i64::MAX / 4;
    let mut u = vec![0i64; n + 1];
    let mut v = vec![0i64; n + 1];
    let mut p = vec![0usize; n + 1];
    let mut way = vec![0usize; n + 1];
    for i in 1..=n {
        p[0] = i;
        let mut j0 = 0;
        let mut minv = vec![INF; n + 1];
        let mut used = vec![false; n + 1];
        loop {
            used[j0] = true;
            let i0 = p[j0];
            let mut delta = INF;
            let mut j1 = 0;
            for j in 1..=n {
                if used[j] {
                    continue;
                }
                let cur = cost[i0][j] - u[i0] - v[j];
                if cur < minv[j] {
                    minv[j] = cur;
                    way[j] = j0;
                }
                if minv[j] < delta {
                    delta = minv[j];
                    j1 = j;
                }
            }
            for j in 0..=n {
                if used[j] {
                    u[p[j]] += delta;
                    v[j] -= delta;
                } else {
                    minv[j] -= delta;
                }
            }
            j0 = j1;
            if p[j0] == 0 {
                break;
            }
        }
        loop {
            let j1 = way[j0];
            p[j0] = p[j1];
            j0 = j1;
            if j0 == 0 {
                break;
            }
        }
    }
    p
}

/// Same quantity by enumerating all injective row-to-column maps.
pub fn jacobi_brute_force(a: &[Vec<Order>]) -> Order {
    let r = a.len();
    let c = a.first().map_or(0, Vec::len);
    if r == 0 || c == 0 {
        return Order::Finite(0);
    }
    let t: Vec<Vec<Order>>;
    let m = if r <= c {
        a
    } else {
        t = (0..c).map(|j| (0..r).map(|i| a[i][j]).collect()).collect();
        &t
    };
    fn go(m: &[Vec<Order>], row: usize, used: &mut Vec<bool>) -> Order {
        if row == m.len() {
            return Order::Finite(0);
        }
        let mut best = Order::NegInf;
        for j in 0..used.len() {
            if used[j] {
                continue;
            }
            let Order::Finite(w) = m[row][j] else { continue };
            used[j] = true;
            if let Order::Finite(rest) = go(m, row + 1, used) {
                best = best.max(Order::Finite(w + rest));
            }
            used[j] = false;
        }
        best
    }
    go(m, 0, &mut vec![false; m[0].len()])
}
