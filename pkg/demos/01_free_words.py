"""Free-group words: parsing, reduction and enumeration.

Lowercase letters are generators, uppercase their inverses, and "1" is the
empty word.
"""
from cogrowth.freewords import count_reduced, enumerate_reduced, parse_word, reduce

w = parse_word("abBAab")
print("abBAab reduces to", w, "of length", len(w))
print("its inverse is", w.inverse())
print("w * w^-1 =", w * w.inverse())

# reduce() also takes letters or other words
print("reduce('aAbB') =", reduce("aAbB"))

# reduced words of length n number 2r(2r-1)^(n-1); for r=2 that is 4*3^(n-1)
for n in range(5):
    listed = sum(1 for _ in enumerate_reduced(2, n))
    print(f"n={n}: {listed} reduced words (formula {count_reduced(2, n)})")

print("first words of length 2:", [str(x) for x in list(enumerate_reduced(2, 2))[:6]])
