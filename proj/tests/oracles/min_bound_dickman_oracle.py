"""Ratio |e^{-zJ(s)}| / min(|s|^Re z, 1) over the check grid, and Dickman rho on [2, 4] from the dilogarithm closed form."""
import mpmath as mp
mp.mp.dps=25
g=mp.euler
def Ein(w): return mp.nsum(lambda k: (-1)**(k+1)*w**k/(k*mp.factorial(k)),[1,mp.inf])
def emzj(s,z):
    # e^{-zJ(s)} = (s * rhohat(s))^z via s^z * exp(z(g-Ein(s)))
    return mp.exp(z*(mp.log(s)+g-Ein(s)))
S=[0.01,0.1,mp.mpc(0.5,0.5),1,mp.mpc(2,3),10,mp.mpc(-0.2,0.5),mp.mpc(-0.25,-1),mp.mpc(0.05,2)]
Z=[0.8,1,1.2,mp.mpc(1,0.2),mp.mpc(0.9,-0.1)]
rs=[]
for s in S:
  for z in Z:
    r=abs(emzj(s,z))/min(abs(s)**mp.re(z),1); rs.append(r)
print(min(rs),max(rs))
# dickman closed form on [2,3]
rho23=lambda v: 1-(1-mp.log(v-1))*mp.log(v)+mp.polylog(2,1-v)+mp.pi**2/12
print('rho3',rho23(3),'rho2.5',rho23(2.5))
r4=rho23(3)-mp.quad(lambda t: rho23(t-1)/t,[3,4])
print('rho4',r4)
print('F s=2 odd', 8/mp.pi**2)
