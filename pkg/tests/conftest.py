from itertools import combinations


def enumerate_paths(p, d, n, strict):
    """Brute-force count of paths (0,0) -> (n, pn+d) below y = p*x + d."""
    ups = p * n + d
    total = n + ups
    if strict and total == 0:
        return 0
    count = 0
    for up_pos in combinations(range(total), ups):
        up_set = set(up_pos)
        a = b = 0
        ok = True
        for i in range(total):
            if i in up_set:
                b += 1
            else:
                a += 1
            last = i == total - 1
            if strict and not last and not b < p * a + d:
                ok = False
                break
            if not strict and b > p * a + d:
                ok = False
                break
        count += ok
    return count
