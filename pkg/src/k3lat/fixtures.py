"""Built-in dataset: the fifteen maximal symplectic groups.

Each block carries the group order, its invariant Gram matrices, and,
where the glue analysis pins a unique class, the discriminant form of the
rank-20 coinvariant partner.  Six groups admit two non-isomorphic partner
candidates and ship without a disc form until their coinvariant lattices
are transcribed; ``k3lat table`` skips them with a warning.  The Leech
block feeds the short-vector stress tests.
"""

DATASET_TEXT = """\
format 1

lattice Leech
gram 24
6 2 3 2 3 3 3 2 2 2 3 3 3 3 3 3 3 3 3 3 3 3 3 5
2 4 2 2 2 1 2 2 2 2 2 2 1 1 1 1 1 0 0 1 0 0 1 0
3 2 4 2 2 2 2 2 2 1 2 2 2 2 1 2 1 1 2 1 2 1 2 2
2 2 2 4 2 2 2 2 2 2 1 2 1 1 0 0 0 1 1 1 0 1 1 0
3 2 2 2 4 2 1 2 2 2 2 2 2 2 1 1 2 2 1 2 2 1 1 2
3 1 2 2 2 4 2 2 2 2 2 2 1 2 2 1 1 2 2 1 2 2 1 2
3 2 2 2 1 2 4 2 2 2 2 2 1 1 2 2 1 1 2 2 1 2 2 2
2 2 2 2 2 2 2 4 2 2 2 1 1 0 1 1 0 1 1 1 1 0 0 0
2 2 2 2 2 2 2 2 4 2 2 2 0 1 0 1 1 0 1 1 1 1 0 0
2 2 1 2 2 2 2 2 2 4 2 2 0 0 1 0 1 1 0 1 1 1 1 0
3 2 2 1 2 2 2 2 2 2 4 2 2 1 2 2 2 1 1 1 2 2 1 2
3 2 2 2 2 2 2 1 2 2 2 4 1 2 1 2 2 2 1 1 1 2 2 2
3 1 2 1 2 1 1 1 0 0 2 1 4 2 2 2 2 2 2 2 2 2 2 4
3 1 2 1 2 2 1 0 1 0 1 2 2 4 2 2 2 2 2 2 2 2 2 4
3 1 1 0 1 2 2 1 0 1 2 1 2 2 4 2 2 2 2 2 2 2 2 4
3 1 2 0 1 1 2 1 1 0 2 2 2 2 2 4 2 2 2 2 2 2 2 4
3 1 1 0 2 1 1 0 1 1 2 2 2 2 2 2 4 2 2 2 2 2 2 4
3 0 1 1 2 2 1 1 0 1 1 2 2 2 2 2 2 4 2 2 2 2 2 4
3 0 2 1 1 2 2 1 1 0 1 1 2 2 2 2 2 2 4 2 2 2 2 4
3 1 1 1 2 1 2 1 1 1 1 1 2 2 2 2 2 2 2 4 2 2 2 4
3 0 2 0 2 2 1 1 1 1 2 1 2 2 2 2 2 2 2 2 4 2 2 4
3 0 1 1 1 2 2 0 1 1 2 2 2 2 2 2 2 2 2 2 2 4 2 4
3 1 2 1 1 1 2 0 0 1 1 2 2 2 2 2 2 2 2 2 2 2 4 4
5 0 2 0 2 2 2 0 0 0 2 2 4 4 4 4 4 4 4 4 4 4 4 8
end

group L2(11)
order 660
gram 3
2 1 0
1 6 0
0 0 22
gram 3
6 2 2
2 8 -3
2 -3 8
disc 11 11
q 16/11 20/11
end

group L3(4)
order 20160
gram 3
2 0 0
0 10 4
0 4 10
gram 3
4 2 0
2 4 0
0 0 14
disc 2 42
q 1 29/21
b 0 1 1/2
end

group A7
order 2520
gram 3
2 1 0
1 2 0
0 0 70
gram 3
2 0 1
0 6 0
1 0 18
gram 3
4 2 1
2 6 3
1 3 12
gram 3
6 3 1
3 6 1
1 1 8
disc 105
q 116/105
end

group 2^3:L2(7)
order 1344
gram 3
4 0 0
0 6 2
0 2 10
end

group 2xL2(7)
order 336
gram 3
2 0 0
0 14 0
0 0 14
gram 3
4 2 0
2 8 0
0 0 14
end

group 2:A6
order 720
gram 3
2 0 0
0 4 0
0 0 24
gram 3
4 0 0
0 6 0
0 0 8
end

group 2^4:S5
order 1920
gram 3
2 0 0
0 4 0
0 0 40
gram 3
4 0 0
0 8 0
0 0 10
end

group S6
order 720
gram 3
4 2 0
2 4 0
0 0 30
disc 6 30
q 5/3 13/15
b 0 1 1/2
end

group M10
order 720
gram 3
2 0 0
0 4 0
0 0 30
gram 3
4 2 0
2 6 0
0 0 12
disc 2 60
q 3/2 97/60
end

group (3xA5):2
order 360
gram 3
4 1 0
1 4 0
0 0 30
gram 3
6 0 0
0 10 5
0 5 10
disc 15 15
q 26/15 28/15
end

group Q(3^2:2)
order 1458
gram 3
6 2 2
2 6 -2
2 -2 14
end

group 2^4:(S3xS3)
order 576
gram 3
4 0 0
0 6 0
0 0 24
end

group 3^2:QD16
order 144
gram 3
4 2 0
2 10 0
0 0 12
disc 6 36
q 7/6 65/36
b 0 1 2/3
end

group 3^(1+4):2.2^2
order 1944
gram 3
6 0 0
0 6 0
0 0 6
disc 3 6 6
q 4/3 11/6 11/6
end

group 3^4:A6
order 29160
gram 3
6 3 0
3 6 0
0 0 6
disc 3 3 9
q 4/3 4/3 16/9
b 0 2 1/3
b 1 2 2/3
end
"""
