"""
Layered circuits and QASM
=========================

Gates are packed greedily into layers as the file is read. Slicing works on
layers and clamps out-of-range ends.
"""

from laqe import parse_qasm, print_qasm

src = """OPENQASM 2.0;
include "qelib1.inc";
qreg q[3];
h q[0];
x q[1];
cx q[0],q[1];
rz(pi/4) q[2];
t q[0];
"""

c = parse_qasm(src)
print(c)
print("size", c.size, "length", c.length)

for i, layer in enumerate(c):
    print(i, [g.qasm() for g in layer])

# slicing past the end is clamped, never wraps
print("c[1:99] has", c[1:99].length, "layers")
print("c[0:1] ; c[1:] == c ->", c[0:1] + c[1:c.length] == c)

print(print_qasm(c[0:1]))
