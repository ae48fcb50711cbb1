"""Independent reference implementations used to derive expected values.

Deliberately share no code with the package.
"""
MASK = (1 << 64) - 1


def splitmix64_stream(seed):
    s = seed
    while True:
        s = (s + 0x9E3779B97F4A7C15) & MASK
        z = s
        z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & MASK
        z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & MASK
        yield z ^ (z >> 31)


def shuffle(n, seed, sattolo=False):
    a = list(range(n))
    g = splitmix64_stream(seed)
    for i in range(n - 1, 0, -1):
        v = next(g)
        j = v % i if sattolo else v % (i + 1)
        a[i], a[j] = a[j], a[i]
    return a


def pairing_table(n, order=None):
    """``table[r][x]`` = partner of x in round r, or None on a self-loop."""
    order = list(range(n)) if order is None else list(order)
    table = []
    for r in range(n):
        row = []
        for x in range(n):
            t = (order[r] - x) % n
            row.append(None if t == x else t)
        table.append(row)
    return table


def cycle_count(perm):
    seen = [False] * len(perm)
    cycles = 0
    for start in range(len(perm)):
        if not seen[start]:
            cycles += 1
            i = start
            while not seen[i]:
                seen[i] = True
                i = perm[i]
    return cycles
