int clampIndex (int i, int lo, int hi)
{
    int VAR1 = i;
    if (VAR1 < lo) VAR1 = lo;
    if (VAR1 > hi) VAR1 = hi;
    ++VAR1;
    return VAR1;
}
