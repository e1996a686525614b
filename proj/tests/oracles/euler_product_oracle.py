"""Euler product F(s+1; p, 1) against e^{-J(s log p)} at s = 1/log(1e10), with and without the E1 tail completion."""
import numpy as np, mpmath as mp
def sieve(n):
    s=np.ones(n+1,dtype=bool); s[:2]=False
    for i in range(2,int(n**.5)+1):
        if s[i]: s[i*i::i]=False
    return np.nonzero(s)[0]
for Q in [10**7, 10**8]:
    P=sieve(Q).astype(np.float64)
    s=1/np.log(1e10)
    for p in [1009,10007,100003]:
        qs=P[P>p]
        lg=np.sum(np.log1p(-qs**(-1-s)))
        tail=-float(mp.e1(s*np.log(Q)))
        val=np.exp(lg+tail)
        ref=np.exp(-float(mp.e1(s*np.log(p))))
        print(Q,p,abs(val/ref-1), abs(np.exp(lg)/ref-1))
