void fillGaussian (amrex::MultiFab& mf, const amrex::Real* dx)
{
    for (amrex::MFIter VAR1(mf); VAR1.isValid(); ++VAR1) {
        const amrex::Box& VAR2 = VAR1.validbox();
        auto const& VAR3 = mf.array(VAR1);
        amrex::ParallelFor(VAR2, [=] AMREX_GPU_DEVICE (int i, int j, int k)
        {
            amrex::Real VAR4 = (i + 0.5) * dx[0];
            amrex::Real VAR5 = (j + 0.5) * dx[1];
            amrex::Real VAR6 = VAR4*VAR4 + VAR5*VAR5;
            VAR3(i,j,k) = std::exp(-VAR6);
        });
    }
}
