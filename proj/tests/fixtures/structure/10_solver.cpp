#include <AMReX_MLMG.H>
#include <AMReX_MLPoisson.H>

class PoissonSolver
{
public:
    PoissonSolver (const amrex::Geometry& geom, const amrex::BoxArray& ba,
                   const amrex::DistributionMapping& dm);

    void solve (amrex::MultiFab& phi, const amrex::MultiFab& rhs,
                amrex::Real tol_rel = 1.e-10);

    int numIterations () const { return m_iters; }

private:
    amrex::Geometry m_geom;
    amrex::BoxArray m_ba;
    amrex::DistributionMapping m_dm;
    int m_iters = 0;
};

PoissonSolver::PoissonSolver (const amrex::Geometry& geom, const amrex::BoxArray& ba,
                              const amrex::DistributionMapping& dm)
    : m_geom(geom), m_ba(ba), m_dm(dm)
{}

void
PoissonSolver::solve (amrex::MultiFab& phi, const amrex::MultiFab& rhs,
                      amrex::Real tol_rel)
{
    amrex::MLPoisson linop({m_geom}, {m_ba}, {m_dm});
    linop.setDomainBC({AMREX_D_DECL(amrex::LinOpBCType::Dirichlet,
                                    amrex::LinOpBCType::Dirichlet,
                                    amrex::LinOpBCType::Dirichlet)},
                      {AMREX_D_DECL(amrex::LinOpBCType::Dirichlet,
                                    amrex::LinOpBCType::Dirichlet,
                                    amrex::LinOpBCType::Dirichlet)});
    linop.setLevelBC(0, nullptr);
    amrex::MLMG mlmg(linop);
    mlmg.solve({&phi}, {&rhs}, tol_rel, 0.0);
    m_iters = mlmg.getNumIters();
}
