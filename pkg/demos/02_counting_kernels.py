"""Counting kernel words of a marked group.

gamma_n counts reduced words of length n that evaluate to the identity;
W_n counts all words of length n that do.  The transfer DP is checked here
against brute-force enumeration.
"""
from cogrowth.counting import count_table, gamma_bruteforce
from cogrowth.marked_groups import list_presets, load_preset

for name in list_presets():
    G = load_preset(name)
    t = count_table(G, 12)
    brute = [gamma_bruteforce(G, n) for n in range(9)]
    agree = brute == t.gamma[:9]
    print(f"{name:9s} gamma={t.gamma}  brute-force agrees to n=8: {agree}")

# SL(2,Z) has no kernel words shorter than 6
sl = count_table(load_preset("sl2z"), 20)
print("SL(2,Z) gamma_6..gamma_20:", sl.gamma[6::2])
print("SL(2,Z) W_20 =", sl.walk[20])

# a count table is a portable JSON document with exact integers as strings
print(count_table(load_preset("z2xz2"), 4).to_json())
