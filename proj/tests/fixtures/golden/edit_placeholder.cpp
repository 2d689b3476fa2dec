#include <AMReX_MultiFab.H>

void initData (amrex::MultiFab& mf, const amrex::Real* dx)
{
    // TODO: fill mf with a Gaussian bump
    (void)mf;
    (void)dx;
    return;
}

int main () { return 0; }
